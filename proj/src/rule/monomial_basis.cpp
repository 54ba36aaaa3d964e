#include "paretoaro/rule/monomial_basis.hpp"

#include <cmath>
#include <numeric>

#include "paretoaro/common/error.hpp"

namespace paretoaro::rule {

int total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

namespace {

// Exponents of exact total degree t, leading powers descending.
void enumerate(int vars, int remaining, int pos, Exponent& cur, std::vector<Exponent>& out) {
  if (pos == vars - 1) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int p = remaining; p >= 0; --p) {
    cur[pos] = p;
    enumerate(vars, remaining - p, pos + 1, cur, out);
  }
}

}  // namespace

MonomialBasis::MonomialBasis(int vars, int degree) : vars_(vars), degree_(degree) {
  require(vars >= 1, ErrorCode::kInvalidArgument, "basis needs at least one variable");
  require(degree >= 0, ErrorCode::kInvalidArgument, "basis degree must be >= 0");
  Exponent cur(vars, 0);
  for (int t = 0; t <= degree; ++t) enumerate(vars, t, 0, cur, exponents_);
}

int MonomialBasis::index_of(const Exponent& e) const {
  if (static_cast<int>(e.size()) != vars_) return -1;
  const int t = total_degree(e);
  if (t > degree_) return -1;
  const int start = t == 0 ? 0 : basis_size(vars_, t - 1);
  const int stop = basis_size(vars_, t);
  for (int i = start; i < stop; ++i) {
    if (exponents_[i] == e) return i;
  }
  return -1;
}

Vector MonomialBasis::evaluate(const Vector& u) const {
  require(u.size() == vars_, ErrorCode::kDimensionMismatch, "point dimension does not match basis");
  Vector out(size());
  for (int i = 0; i < size(); ++i) out(i) = monomial_value(exponents_[i], u);
  return out;
}

int basis_size(int vars, int degree) {
  if (degree < 0) return 0;
  // C(vars + degree, degree) computed incrementally to stay exact.
  long long r = 1;
  for (int i = 1; i <= degree; ++i) r = r * (vars + i) / i;
  return static_cast<int>(r);
}

double monomial_value(const Exponent& e, const Vector& u) {
  double v = 1.0;
  for (std::size_t j = 0; j < e.size(); ++j) {
    for (int p = 0; p < e[j]; ++p) v *= u(static_cast<Eigen::Index>(j));
  }
  return v;
}

}  // namespace paretoaro::rule
