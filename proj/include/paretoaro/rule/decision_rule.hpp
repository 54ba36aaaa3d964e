#pragma once

#include <vector>

#include <json.hpp>

#include "paretoaro/common/error.hpp"
#include "paretoaro/common/types.hpp"
#include "paretoaro/molp/molp.hpp"
#include "paretoaro/regions/moments.hpp"
#include "paretoaro/rule/monomial_basis.hpp"
#include "paretoaro/rule/polynomial.hpp"

namespace paretoaro::rule {

// x(u): row i of `coeffs` holds the coefficients of x_i(u) in `basis` order.
struct PolynomialRule {
  MonomialBasis basis;
  Matrix coeffs;

  PolynomialRule() = default;
  PolynomialRule(MonomialBasis b, Matrix c);

  int num_outputs() const { return static_cast<int>(coeffs.rows()); }
  Vector evaluate(const Vector& u) const;
  // n x vars Jacobian.
  Matrix gradient(const Vector& u) const;
  Polynomial component(int i) const;
  // sum_i w_i x_i(u) as a polynomial.
  Polynomial combination(const Vector& w) const;
};

PolynomialRule operator+(const PolynomialRule& a, const PolynomialRule& b);

// ((c^1)'x(u), ..., (c^k)'x(u)).
molp::ObjectivePoint objective_curve(const PolynomialRule& rule, const molp::Molp& problem, const Vector& u);

// x_i(u) = alpha0_i + alpha1_i'u + u'Gamma_i u for a rule of degree <= 2.
struct QuadraticRuleView {
  Vector alpha0;
  std::vector<Vector> alpha1;
  std::vector<Matrix> gamma;

  static QuadraticRuleView from_rule(const PolynomialRule& rule);
  PolynomialRule to_rule() const;
  Vector gradient(int i, const Vector& u) const { return alpha1[i] + 2.0 * gamma[i] * u; }
};

nlohmann::json to_json(const PolynomialRule& rule);
PolynomialRule rule_from_json(const nlohmann::json& j);

// A univariate polynomial p(t) rewritten on the lifted monomials of s, where
// t = h s + m: p(t) = constant + sum_j linear[j] s^(j+1).
template <class T>
struct LiftedExpr {
  T constant{};
  std::vector<T> linear;
};

template <class T>
LiftedExpr<T> substitute_affine(const BasicPolynomial<T>& p, const regions::MomentTransform& tf) {
  require(p.vars() == 1, ErrorCode::kUnsupportedDimension, "substitute_affine needs a scalar u (k = 2)");
  require(p.degree() <= tf.degree, ErrorCode::kInvalidArgument, "polynomial degree exceeds transform degree");
  LiftedExpr<T> out;
  out.linear.assign(tf.degree, T{});
  for (const auto& [e, c] : p.terms()) {
    const int j = e[0];
    if (j == 0) {
      out.constant += c;
      continue;
    }
    // t^j = (D zeta + d)_j
    out.constant += c * tf.d(j - 1);
    for (int i = 0; i < j; ++i) {
      if (tf.D(j - 1, i) != 0.0) out.linear[i] += c * tf.D(j - 1, i);
    }
  }
  return out;
}

}  // namespace paretoaro::rule
