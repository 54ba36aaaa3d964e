#include <cmath>
#include <random>

#include "paretoaro/common/error.hpp"
#include "paretoaro/conic/solver.hpp"
#include "paretoaro/regions/region.hpp"

#include <Eigen/Cholesky>

namespace paretoaro::regions {

namespace {

// Center of the largest inscribed ball of P u <= q.
Vector chebyshev_center(const Polyhedron& p) {
  conic::ConicProgram lp;
  const int n = static_cast<int>(p.P.cols());
  const int u = lp.add_block("u", conic::Cone::kFree, n);
  const int r = lp.add_block("r", conic::Cone::kNonNeg, 1);
  const int s = lp.add_block("s", conic::Cone::kNonNeg, static_cast<int>(p.P.rows()));
  for (Eigen::Index i = 0; i < p.P.rows(); ++i) {
    conic::LinExpr row = lp.var(s, static_cast<int>(i)) + p.P.row(i).norm() * lp.var(r);
    for (int j = 0; j < n; ++j) row += p.P(i, j) * lp.var(u, j);
    lp.add_equality(row, p.q(i));
  }
  lp.set_objective(-lp.var(r));
  const auto sol = conic::solve(lp);
  if (sol.status == conic::Status::kInfeasible) fail(ErrorCode::kEmptyRegion, "polyhedron is empty");
  require(conic::solved(sol.status), ErrorCode::kInvalidBound, "Chebyshev center LP failed");
  require(sol.value(lp.var(r)) > 1e-12, ErrorCode::kEmptyRegion, "polyhedron has empty interior");
  Vector c(n);
  for (int j = 0; j < n; ++j) c(j) = sol.value(lp.var(u, j));
  return c;
}

Vector gaussian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(n);
  for (int j = 0; j < n; ++j) v(j) = g(rng);
  return v;
}

std::vector<Vector> hit_and_run(const Polyhedron& p, int count, std::mt19937_64& rng) {
  const int n = static_cast<int>(p.P.cols());
  Vector x = chebyshev_center(p);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto step = [&] {
    Vector d = gaussian(rng, n);
    d.normalize();
    // chord {x + t d} inside P u <= q
    const Vector pd = p.P * d;
    const Vector slack = p.q - p.P * x;
    double lo = -INFINITY;
    double hi = INFINITY;
    for (Eigen::Index i = 0; i < pd.size(); ++i) {
      const double s = std::max(slack(i), 0.0);
      if (pd(i) > 1e-14) hi = std::min(hi, s / pd(i));
      if (pd(i) < -1e-14) lo = std::max(lo, s / pd(i));
    }
    require(std::isfinite(lo) && std::isfinite(hi), ErrorCode::kInvalidBound, "polyhedron is unbounded");
    x += (lo + (hi - lo) * unif(rng)) * d;
  };
  const int burn_in = 100 * n;
  const int thinning = 10;
  for (int i = 0; i < burn_in; ++i) step();
  std::vector<Vector> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    for (int t = 0; t < thinning; ++t) step();
    out.push_back(x);
  }
  return out;
}

// Uniform points in the ellipsoid (u-c)'E(u-c) <= 1.
std::vector<Vector> ellipsoid_points(const Ellipsoid& e, int count, std::mt19937_64& rng) {
  const int n = static_cast<int>(e.center.size());
  // u = c + L^{-T} v with E = L L' and |v| <= 1
  const Eigen::LLT<Matrix> llt(e.E);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Vector> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Vector v = gaussian(rng, n);
    v *= std::pow(unif(rng), 1.0 / n) / v.norm();
    // slightly inside so the boundary tolerance never bites
    v *= 1.0 - 1e-12;
    out.push_back(e.center + llt.matrixU().solve(v));
  }
  return out;
}

}  // namespace

std::vector<Vector> sample(const Region& region, int count, std::uint64_t seed) {
  require(count >= 1, ErrorCode::kInvalidArgument, "sample count must be >= 1");
  std::mt19937_64 rng(seed);
  if (const auto* i = std::get_if<Interval>(&region)) {
    require(i->a <= i->b, ErrorCode::kEmptyRegion, "interval is empty");
    std::vector<Vector> out;
    for (int k = 0; k < count; ++k) {
      const double t = count == 1 ? 0.5 : static_cast<double>(k) / (count - 1);
      out.push_back(Vector::Constant(1, count == 1 ? 0.5 * (i->a + i->b) : i->a + t * (i->b - i->a)));
    }
    if (count > 1) out.back()(0) = i->b;
    return out;
  }
  if (std::holds_alternative<Box>(region) || std::holds_alternative<Polyhedron>(region)) {
    return hit_and_run(as_polyhedron(region), count, rng);
  }
  if (is_ellipsoidal(region)) return ellipsoid_points(as_ellipsoid(region), count, rng);

  const auto& s = std::get<Semialgebraic>(region);
  require(s.bounds.has_value(), ErrorCode::kInvalidBound, "rejection sampling needs a bounding box");
  const Box& b = *s.bounds;
  std::vector<std::uniform_real_distribution<double>> coord;
  for (Eigen::Index j = 0; j < b.lo.size(); ++j) coord.emplace_back(b.lo(j), b.hi(j));
  std::vector<Vector> out;
  const long max_tries = 10000L * count + 100000L;
  for (long t = 0; t < max_tries && static_cast<int>(out.size()) < count; ++t) {
    Vector u(b.lo.size());
    for (Eigen::Index j = 0; j < u.size(); ++j) u(j) = coord[j](rng);
    if (contains(region, u)) out.push_back(std::move(u));
  }
  require(static_cast<int>(out.size()) == count, ErrorCode::kEmptyRegion, "rejection sampling found too few points");
  return out;
}

}  // namespace paretoaro::regions
