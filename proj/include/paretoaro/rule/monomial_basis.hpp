#pragma once

#include <vector>

#include "paretoaro/common/types.hpp"

namespace paretoaro::rule {

using Exponent = std::vector<int>;

int total_degree(const Exponent& e);

// All monomials u^a in `vars` variables with |a| <= degree, graded
// lexicographically: by total degree, then larger leading powers first
// (1, u1, u2, u1^2, u1 u2, u2^2, ...).
class MonomialBasis {
 public:
  MonomialBasis() = default;
  MonomialBasis(int vars, int degree);

  int vars() const { return vars_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exponents_.size()); }
  const std::vector<Exponent>& exponents() const { return exponents_; }
  const Exponent& operator[](int i) const { return exponents_[i]; }

  // -1 when the exponent is not part of the basis.
  int index_of(const Exponent& e) const;

  // Values of every monomial at u.
  Vector evaluate(const Vector& u) const;

  bool operator==(const MonomialBasis& o) const { return vars_ == o.vars_ && degree_ == o.degree_; }

 private:
  int vars_ = 0;
  int degree_ = 0;
  std::vector<Exponent> exponents_;
};

// Number of monomials of degree <= d in n variables, C(n+d, d).
int basis_size(int vars, int degree);

double monomial_value(const Exponent& e, const Vector& u);

}  // namespace paretoaro::rule
