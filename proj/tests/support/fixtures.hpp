#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "paretoaro/molp/molp.hpp"
#include "paretoaro/regions/region.hpp"
#include "paretoaro/rule/decision_rule.hpp"

namespace fixtures {

using paretoaro::Matrix;
using paretoaro::Vector;
using paretoaro::molp::Molp;

// min -x1, -x2 over x >= 0, x1 + x2 <= 1, x1 + 2 x2 <= 1.5.
inline Molp instance_r() {
  Molp p;
  p.A.resize(4, 2);
  p.A << 1, 1, 1, 2, -1, 0, 0, -1;
  p.b.resize(4);
  p.b << 1, 1.5, 0, 0;
  Vector c1(2), c2(2);
  c1 << -1, 0;
  c2 << 0, -1;
  p.objectives = {c1, c2};
  return p;
}

// Closed-form front of instance R on [-1, 0].
inline double front_r(double u) { return u <= -0.5 ? -(1.0 + u) : -(1.5 + u) / 2.0; }

// Three objectives over the nonnegative orthant of R^10; c1, c2 in [0.2, 1]
// and c3 in [-1, 0], so the front is bounded for u >= 0.
inline Molp instance_orthant(std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0.2, 1.0), neg(-1.0, 0.0);
  const int n = 10;
  Molp p;
  p.A = -Matrix::Identity(n, n);
  p.b = Vector::Zero(n);
  Vector c1(n), c2(n), c3(n);
  for (int j = 0; j < n; ++j) {
    c1(j) = pos(rng);
    c2(j) = pos(rng);
    c3(j) = neg(rng);
  }
  p.objectives = {c1, c2, c3};
  return p;
}

// Semi-random: 20 random rows in 30 variables plus the box 0 <= x <= 1, so
// the feasible set is bounded; c1 in [0, 1]^30 and c2 in [-1, 0]^30 conflict.
inline Molp instance_random(std::uint64_t seed = 11) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> entry(-1.0, 1.0), rhs(0.5, 1.5), unit(0.0, 1.0);
  const int m = 20, n = 30;
  Molp p;
  p.A = Matrix::Zero(m + 2 * n, n);
  p.b = Vector::Zero(m + 2 * n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) p.A(i, j) = entry(rng);
    p.b(i) = rhs(rng);
  }
  p.A.block(m, 0, n, n) = -Matrix::Identity(n, n);
  p.A.block(m + n, 0, n, n) = Matrix::Identity(n, n);
  p.b.tail(n).setOnes();
  Vector c1(n), c2(n);
  for (int j = 0; j < n; ++j) {
    c1(j) = unit(rng);
    c2(j) = -unit(rng);
  }
  p.objectives = {c1, c2};
  return p;
}

// [min c1'x, c1'x at the lexicographic minimum of (c2, c1)]: the part of the
// u-axis where the front of a k = 2 problem is not flat, shrunk by margin
// (a fraction of its length) at both ends. At u = min c1'x the constraint
// c1'x(u) <= u has no interior and the robust program loses strict feasibility.
inline paretoaro::regions::Interval nonflat_interval(const Molp& p, double margin = 0.02) {
  using paretoaro::molp::scalarize_epsilon_constraint;
  Molp swapped = p;
  std::swap(swapped.objectives[0], swapped.objectives[1]);
  const double big = 1e3;
  const auto min1 = scalarize_epsilon_constraint(swapped, Vector::Constant(1, big));
  const auto min2 = scalarize_epsilon_constraint(p, Vector::Constant(1, big));
  const double lo = (*min1.f)(1);
  const auto lex = scalarize_epsilon_constraint(swapped, Vector::Constant(1, (*min2.f)(1) + 1e-9));
  const double hi = (*lex.f)(1);
  return {lo + margin * (hi - lo), hi - margin * (hi - lo)};
}

// Independent front oracle for problems with n = 2 variables: enumerates the
// vertices of {A x <= b, (c^i)'x <= u_i} as intersections of two active rows.
inline std::optional<double> vertex_front_2d(const Molp& p, const Vector& u) {
  const int k = static_cast<int>(p.objectives.size());
  Matrix G(p.A.rows() + k - 1, 2);
  Vector h(p.A.rows() + k - 1);
  G.topRows(p.A.rows()) = p.A;
  h.head(p.A.rows()) = p.b;
  for (int i = 0; i + 1 < k; ++i) {
    G.row(p.A.rows() + i) = p.objectives[i].transpose();
    h(p.A.rows() + i) = u(i);
  }
  std::optional<double> best;
  for (int r = 0; r < G.rows(); ++r) {
    for (int s = r + 1; s < G.rows(); ++s) {
      Matrix M(2, 2);
      M.row(0) = G.row(r);
      M.row(1) = G.row(s);
      if (std::abs(M.determinant()) < 1e-12) continue;
      Vector rhs(2);
      rhs << h(r), h(s);
      const Vector x = M.partialPivLu().solve(rhs);
      if (((G * x - h).array() > 1e-9).any()) continue;
      const double v = p.objectives.back().dot(x);
      if (!best || v < *best) best = v;
    }
  }
  return best;
}

// Independent oracle for the orthant instance: a basic optimal solution of
// min c3'x, c1'x <= u1, c2'x <= u2, x >= 0 has at most two nonzeros.
inline std::optional<double> orthant_front(const Molp& p, const Vector& u) {
  if (u(0) < -1e-12 || u(1) < -1e-12) return std::nullopt;
  const Vector& c1 = p.objectives[0];
  const Vector& c2 = p.objectives[1];
  const Vector& c3 = p.objectives[2];
  const int n = static_cast<int>(c1.size());
  double best = 0.0;  // x = 0
  auto consider = [&](const Vector& x) {
    if ((x.array() < -1e-12).any()) return;
    if (c1.dot(x) > u(0) + 1e-9 || c2.dot(x) > u(1) + 1e-9) return;
    best = std::min(best, c3.dot(x));
  };
  for (int j = 0; j < n; ++j) {
    Vector x = Vector::Zero(n);
    x(j) = std::min(u(0) / c1(j), u(1) / c2(j));
    consider(x);
    for (int l = j + 1; l < n; ++l) {
      Matrix M(2, 2);
      M << c1(j), c1(l), c2(j), c2(l);
      if (std::abs(M.determinant()) < 1e-12) continue;
      const Vector t = M.partialPivLu().solve(u);
      Vector y = Vector::Zero(n);
      y(j) = t(0);
      y(l) = t(1);
      consider(y);
    }
  }
  return best;
}

// Largest violation of A x(u) <= b and (c^i)'x(u) <= u_i over the points.
inline double max_violation(const Molp& p, const paretoaro::rule::PolynomialRule& rule,
                            const std::vector<Vector>& pts) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& u : pts) {
    const Vector x = rule.evaluate(u);
    worst = std::max(worst, (p.A * x - p.b).maxCoeff());
    for (int i = 0; i + 1 < static_cast<int>(p.objectives.size()); ++i) {
      worst = std::max(worst, p.objectives[i].dot(x) - u(i));
    }
  }
  return worst;
}

inline std::vector<Vector> line_grid(double a, double b, int n) {
  std::vector<Vector> pts;
  for (int i = 0; i < n; ++i) pts.push_back(Vector::Constant(1, a + (b - a) * i / (n - 1)));
  return pts;
}

}  // namespace fixtures
