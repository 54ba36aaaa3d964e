#pragma once

#include <map>
#include <string>
#include <vector>

#include "paretoaro/conic/program.hpp"
#include "paretoaro/regions/moments.hpp"
#include "paretoaro/regions/region.hpp"
#include "paretoaro/robust/plan.hpp"
#include "paretoaro/rule/monomial_basis.hpp"
#include "paretoaro/rule/polynomial.hpp"

namespace paretoaro::robust {

// Polynomial in u whose coefficients are affine in the decision variables.
using PolyExpr = rule::BasicPolynomial<conic::LinExpr>;

PolyExpr lift(const rule::Polynomial& p);

// A conic program that carries the coefficients of a polynomial rule x(u) as
// one free block "alpha", plus bookkeeping for the auxiliary blocks robust
// constraints add. Entry i * |basis| + a is the coefficient of s^a in x_i,
// with s_j = (u_j - center_j) / scale_j; the normalization keeps the program
// well scaled on regions far from the origin.
class RuleModel {
 public:
  RuleModel(int n, int vars, int degree, const Vector& center = Vector(), const Vector& scale = Vector());

  conic::ConicProgram& program() { return program_; }
  const conic::ConicProgram& program() const { return program_; }
  const rule::MonomialBasis& basis() const { return basis_; }
  int num_outputs() const { return n_; }
  int vars() const { return basis_.vars(); }
  int alpha_block() const { return alpha_block_; }

  // Coefficient of u^a in x_i as an affine expression.
  conic::LinExpr alpha(int i, int a) const;
  // Rule coefficients in the u basis (n x |basis|) from a solution vector.
  Matrix coefficients(const Vector& primal) const;
  PolyExpr x(int i) const;
  // sum_i w_i x_i(u).
  PolyExpr combination(const Vector& w) const;

  // q(u) >= 0 for every u in the region, via `method`.
  void add_robust_nonneg(const PolyExpr& q, const regions::Region& region, RobustMethod method,
                         const std::string& label);

  // A fresh PSD block listed in psd_blocks().
  int add_psd_block(const std::string& name, int order);

  // Gram / S-lemma / moment PSD blocks, for audit after the solve.
  const std::vector<std::pair<std::string, int>>& psd_blocks() const { return psd_blocks_; }
  // Number of robust constraints added so far.
  int num_robust() const { return num_robust_; }

 private:
  void add_linear_polyhedral(const PolyExpr& q, const regions::Polyhedron& p, const std::string& label);
  void add_linear_ellipsoid(const PolyExpr& q, const regions::Ellipsoid& e, const std::string& label);
  void add_moment_interval(const PolyExpr& q, const regions::Interval& iv, const std::string& label);
  void add_s_lemma(const PolyExpr& q, const regions::Ellipsoid& e, const std::string& label);
  void add_sos(const PolyExpr& q, const regions::Region& region, const std::string& label);
  // A Gram-represented SOS polynomial of degree 2r with a fresh PSD block.
  PolyExpr gram_polynomial(int half_degree, const std::string& label);

  conic::ConicProgram program_;
  rule::MonomialBasis basis_;
  Matrix to_u_;
  int n_ = 0;
  int alpha_block_ = -1;
  int num_robust_ = 0;
  std::vector<std::pair<std::string, int>> psd_blocks_;
  std::map<int, regions::MomentDual> moment_cache_;
  std::map<std::string, regions::Semialgebraic> sos_sets_;
};

// Coefficient vector of q for monomials of total degree <= 1: (q0, g).
struct AffineParts {
  conic::LinExpr constant;
  std::vector<conic::LinExpr> linear;
};
AffineParts affine_parts(const PolyExpr& q);

}  // namespace paretoaro::robust
