#pragma once

#include <vector>

#include "paretoaro/common/types.hpp"

// Cone algebra used by the interior-point solver. Vectors are laid out as
// [nonneg | soc_1 | ... | soc_p | svec(psd_1) | ... ]; svec scales
// off-diagonal entries by sqrt(2) so that dot products match trace products.
namespace paretoaro::conic::cones {

struct Dims {
  int nonneg = 0;
  std::vector<int> soc;
  std::vector<int> psd;

  int dim() const;
  // Barrier degree: nonneg count + number of soc cones + sum of psd orders.
  int degree() const;
};

Vector svec(const Matrix& m);
Matrix smat(const Eigen::Ref<const Vector>& v, int order);

Vector identity(const Dims& dims);
Vector jordan(const Dims& dims, const Vector& x, const Vector& y);

// Max alpha >= 0 with x + alpha*dx in the cone (x interior); +inf if none.
double max_step(const Dims& dims, const Vector& x, const Vector& dx);

// Nesterov-Todd scaling: W^{-T} s = W z = lambda.
struct Scaling {
  Vector nonneg_w;
  std::vector<Matrix> W;      // soc blocks, then psd blocks (svec coordinates)
  std::vector<Matrix> W_inv;
  Vector lambda;
};

Scaling nt_scaling(const Dims& dims, const Vector& s, const Vector& z);

Vector apply_W(const Dims& dims, const Scaling& sc, const Vector& v);
Vector apply_W_transpose(const Dims& dims, const Scaling& sc, const Vector& v);
Vector apply_W_inv_transpose(const Dims& dims, const Scaling& sc, const Vector& v);

// Solves lambda o x = v for x where lambda comes from nt_scaling (its psd
// parts are diagonal).
Vector jordan_solve(const Dims& dims, const Vector& lambda, const Vector& v);

}  // namespace paretoaro::conic::cones
