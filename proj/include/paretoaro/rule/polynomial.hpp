#pragma once

#include <map>
#include <string>

#include "paretoaro/common/error.hpp"
#include "paretoaro/rule/monomial_basis.hpp"

namespace paretoaro::rule {

// Sparse multivariate polynomial with coefficients of type T (double, or an
// affine expression in optimization variables).
template <class T>
class BasicPolynomial {
 public:
  BasicPolynomial() = default;
  explicit BasicPolynomial(int vars) : vars_(vars) {}

  static BasicPolynomial constant(int vars, const T& c) {
    BasicPolynomial p(vars);
    p.add_term(Exponent(vars, 0), c);
    return p;
  }
  // The coordinate polynomial u_j.
  static BasicPolynomial coordinate(int vars, int j, const T& scale) {
    BasicPolynomial p(vars);
    Exponent e(vars, 0);
    e[j] = 1;
    p.add_term(e, scale);
    return p;
  }

  int vars() const { return vars_; }
  const std::map<Exponent, T>& terms() const { return terms_; }

  void add_term(const Exponent& e, const T& c) {
    require(static_cast<int>(e.size()) == vars_, ErrorCode::kDimensionMismatch, "exponent length mismatch");
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second += c;
    }
  }

  T coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? T{} : it->second;
  }

  int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
    return d;
  }

  BasicPolynomial& operator+=(const BasicPolynomial& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  BasicPolynomial& operator-=(const BasicPolynomial& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c * -1.0);
    return *this;
  }
  BasicPolynomial& operator*=(double s) {
    for (auto& [e, c] : terms_) c = c * s;
    return *this;
  }

  // Product with a real polynomial.
  BasicPolynomial times(const BasicPolynomial<double>& q) const {
    require(q.vars() == vars_, ErrorCode::kDimensionMismatch, "polynomial variable count mismatch");
    BasicPolynomial out(vars_);
    for (const auto& [e1, c1] : terms_) {
      for (const auto& [e2, c2] : q.terms()) {
        Exponent e(vars_);
        for (int j = 0; j < vars_; ++j) e[j] = e1[j] + e2[j];
        out.add_term(e, c1 * c2);
      }
    }
    return out;
  }

  BasicPolynomial derivative(int var) const {
    BasicPolynomial out(vars_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponent d = e;
      d[var] -= 1;
      out.add_term(d, c * static_cast<double>(e[var]));
    }
    return out;
  }

  // Only meaningful for T = double.
  double evaluate(const Vector& u) const {
    require(u.size() == vars_, ErrorCode::kDimensionMismatch, "point dimension does not match polynomial");
    double v = 0.0;
    for (const auto& [e, c] : terms_) v += c * monomial_value(e, u);
    return v;
  }

 private:
  void check(const BasicPolynomial& o) const {
    require(o.vars_ == vars_, ErrorCode::kDimensionMismatch, "polynomial variable count mismatch");
  }

  int vars_ = 0;
  std::map<Exponent, T> terms_;
};

template <class T>
BasicPolynomial<T> operator+(BasicPolynomial<T> a, const BasicPolynomial<T>& b) {
  return a += b;
}
template <class T>
BasicPolynomial<T> operator-(BasicPolynomial<T> a, const BasicPolynomial<T>& b) {
  return a -= b;
}
template <class T>
BasicPolynomial<T> operator*(BasicPolynomial<T> a, double s) {
  return a *= s;
}

using Polynomial = BasicPolynomial<double>;

// Human-readable form such as "1.5 + -2*u1^2*u2".
std::string to_string(const Polynomial& p);

}  // namespace paretoaro::rule
