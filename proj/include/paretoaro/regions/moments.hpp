#pragma once

#include <vector>

#include "paretoaro/common/types.hpp"

namespace paretoaro::regions {

// Affine lift between s in [-1, 1] and t = h s + m in [a, b]:
// (t, t^2, ..., t^deg) = D (s, s^2, ..., s^deg) + d, D lower triangular.
struct MomentTransform {
  Matrix D;
  Vector d;
  int degree = 0;
  double a = -1.0;
  double b = 1.0;

  // Lifted vector (s, ..., s^degree).
  static Vector lift(double s, int degree);
  Vector apply(const Vector& zeta) const { return D * zeta + d; }
  double to_source(double s) const { return 0.5 * (b - a) * s + 0.5 * (a + b); }
};

MomentTransform moment_interval_transform(double a, double b, int degree);

// Z = { zeta : (1, zeta) = M' lambda,  Hankel(lambda_0..lambda_2deg) PSD },
// the convex hull of {(s, ..., s^deg) : -1 <= s <= 1}. Column j of M holds
// the coefficients of (2t)^j (1 + t^2)^(deg - j) in powers of t, which comes
// from the substitution s = 2t / (1 + t^2).
struct MomentSetZ {
  int degree = 0;
  Matrix M;  // (2 deg + 1) x (deg + 1)

  int hankel_order() const { return degree + 1; }
  // Hankel matrix built from lambda.
  Matrix hankel(const Vector& lambda) const;
  // lambda of the (scaled) point mass representing s.
  Vector point_lambda(double s) const;
};

MomentSetZ build_moment_set(int degree);

// Data of the inner problem  max <C(l), X>  s.t. <A_i, X> = b_i, X PSD,
// that evaluates max { l'zeta : zeta in Z } with X the Hankel matrix. A_1
// normalizes (1 + t^2)^deg; the remaining A_i equate the entries of each
// anti-diagonal. C(l) = sum_j l_j C_j.
struct MomentDual {
  std::vector<Matrix> A;
  Vector b;
  std::vector<Matrix> C;  // one per zeta coordinate
};

MomentDual moment_dual(const MomentSetZ& z);

}  // namespace paretoaro::regions
