#include "paretoaro/regions/moments.hpp"

#include <algorithm>
#include <cmath>

#include "paretoaro/common/error.hpp"

namespace paretoaro::regions {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Canonical Hankel position for lambda_i: the entry closest to the diagonal
// on anti-diagonal i.
std::pair<int, int> canonical(int i) { return {i / 2, i - i / 2}; }

void put(Matrix& m, int r, int c, double v) {
  if (r == c) {
    m(r, r) += v;
  } else {
    m(r, c) += 0.5 * v;
    m(c, r) += 0.5 * v;
  }
}

}  // namespace

Vector MomentTransform::lift(double s, int degree) {
  Vector z(degree);
  double p = 1.0;
  for (int j = 0; j < degree; ++j) {
    p *= s;
    z(j) = p;
  }
  return z;
}

MomentTransform moment_interval_transform(double a, double b, int degree) {
  require(a < b, ErrorCode::kInvalidArgument, "interval requires a < b");
  require(degree >= 1, ErrorCode::kInvalidArgument, "transform degree must be >= 1");
  const double h = 0.5 * (b - a);
  const double m = 0.5 * (a + b);
  MomentTransform t;
  t.degree = degree;
  t.a = a;
  t.b = b;
  t.D = Matrix::Zero(degree, degree);
  t.d = Vector::Zero(degree);
  for (int j = 1; j <= degree; ++j) {
    // (h s + m)^j = sum_i C(j,i) h^i m^(j-i) s^i
    for (int i = 1; i <= j; ++i) t.D(j - 1, i - 1) = binomial(j, i) * std::pow(h, i) * std::pow(m, j - i);
    t.d(j - 1) = std::pow(m, j);
  }
  return t;
}

Matrix MomentSetZ::hankel(const Vector& lambda) const {
  const int n = hankel_order();
  Matrix H(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) H(i, j) = lambda(i + j);
  }
  return H;
}

Vector MomentSetZ::point_lambda(double s) const {
  require(std::abs(s) <= 1.0 + 1e-12, ErrorCode::kInvalidArgument, "point must lie in [-1, 1]");
  s = std::clamp(s, -1.0, 1.0);
  // invert s = 2t / (1 + t^2) on |t| <= 1
  const double t = (s == 0.0) ? 0.0 : (1.0 - std::sqrt(std::max(0.0, 1.0 - s * s))) / s;
  const double w = 1.0 / std::pow(1.0 + t * t, degree);
  Vector lambda(2 * degree + 1);
  double p = 1.0;
  for (int i = 0; i <= 2 * degree; ++i) {
    lambda(i) = w * p;
    p *= t;
  }
  return lambda;
}

MomentSetZ build_moment_set(int degree) {
  require(degree >= 1, ErrorCode::kInvalidArgument, "moment set degree must be >= 1");
  MomentSetZ z;
  z.degree = degree;
  z.M = Matrix::Zero(2 * degree + 1, degree + 1);
  for (int j = 0; j <= degree; ++j) {
    // (2t)^j (1 + t^2)^(deg - j)
    const int rest = degree - j;
    for (int k = 0; k <= rest; ++k) z.M(j + 2 * k, j) = std::pow(2.0, j) * binomial(rest, k);
  }
  return z;
}

MomentDual moment_dual(const MomentSetZ& z) {
  const int n = z.hankel_order();
  const int d = z.degree;
  MomentDual out;
  Matrix A1 = Matrix::Zero(n, n);
  for (int i = 0; i <= 2 * d; ++i) {
    if (z.M(i, 0) == 0.0) continue;
    const auto [r, c] = canonical(i);
    put(A1, r, c, z.M(i, 0));
  }
  out.A.push_back(A1);
  for (int s = 0; s <= 2 * d; ++s) {
    const auto [r, c] = canonical(s);
    const double w = (r == c) ? 1.0 : 2.0;
    for (int r2 = r - 1; r2 >= 0; --r2) {
      const int c2 = s - r2;
      if (c2 >= n) break;
      // <A, X> = w (X_rc - X_r2c2)
      Matrix A = Matrix::Zero(n, n);
      put(A, r, c, w);
      put(A, r2, c2, -w);
      out.A.push_back(A);
    }
  }
  out.b = Vector::Zero(static_cast<Eigen::Index>(out.A.size()));
  out.b(0) = 1.0;
  for (int j = 1; j <= d; ++j) {
    Matrix C = Matrix::Zero(n, n);
    for (int i = 0; i <= 2 * d; ++i) {
      if (z.M(i, j) == 0.0) continue;
      const auto [r, c] = canonical(i);
      put(C, r, c, z.M(i, j));
    }
    out.C.push_back(C);
  }
  return out;
}

}  // namespace paretoaro::regions
