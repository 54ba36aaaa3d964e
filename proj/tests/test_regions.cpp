#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "paretoaro/common/error.hpp"
#include "paretoaro/regions/moments.hpp"
#include "paretoaro/regions/region.hpp"

using namespace paretoaro;
using namespace paretoaro::regions;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kInvalidArgument;
}

std::vector<Region> zoo() {
  Polyhedron tri{Matrix(3, 2), vec({0, 0, 1})};
  tri.P << -1, 0, 0, -1, 1, 1;
  Ellipsoid ell{vec({1, -1}), Matrix(2, 2)};
  ell.E << 2, 0.5, 0.5, 1;
  Semialgebraic disc;
  disc.vars = 2;
  disc.polys.push_back(to_semialgebraic(Ball{vec({0, 0}), 1.0}).polys.front());
  disc.bounds = Box{vec({-1, -1}), vec({1, 1})};
  return {Interval{-1, 0}, Box{vec({0, 0}), vec({1, 2})}, tri, Ball{vec({5, 5}), 5}, ell, disc};
}

}  // namespace

TEST_CASE("membership of simple regions") {
  CHECK(contains(Interval{-1, 0}, vec({-0.5})));
  CHECK(contains(Interval{-1, 0}, vec({0.0})));
  CHECK_FALSE(contains(Interval{-1, 0}, vec({0.1})));
  CHECK(contains(Ball{vec({5, 5}), 5}, vec({5, 0})));
  CHECK_FALSE(contains(Ball{vec({5, 5}), 5}, vec({0, 0})));
  CHECK(code_of([] { contains(Interval{-1, 0}, vec({0, 0})); }) == ErrorCode::kDimensionMismatch);
}

TEST_CASE("validation errors") {
  CHECK(code_of([] { validate(Interval{1, 0}); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { validate(Ball{vec({0}), -1}); }) == ErrorCode::kInvalidArgument);
  Polyhedron half{Matrix(1, 2), vec({1})};
  half.P << 1, 0;
  CHECK(code_of([&] { validate(half); }) == ErrorCode::kInvalidBound);
  Polyhedron empty{Matrix(2, 1), vec({-1, -1})};
  empty.P << 1, -1;
  CHECK(code_of([&] { validate(empty); }) == ErrorCode::kEmptyRegion);
  Ellipsoid indefinite{vec({0, 0}), Matrix::Identity(2, 2)};
  indefinite.E(1, 1) = -1;
  CHECK(code_of([&] { validate(indefinite); }) == ErrorCode::kInvalidArgument);
  Semialgebraic open;
  open.vars = 1;
  CHECK(code_of([&] { validate(open); }) == ErrorCode::kInvalidBound);
  for (const auto& r : zoo()) CHECK_NOTHROW(validate(r));
}

TEST_CASE("semialgebraic description has the same members") {
  for (const auto& r : zoo()) {
    const Semialgebraic s = to_semialgebraic(r);
    const Box bb = bounding_box(r);
    const Vector lo = bb.lo.array() - 1.0, hi = bb.hi.array() + 1.0;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int agree = 0, total = 0;
    for (int t = 0; t < 500; ++t) {
      Vector u(lo.size());
      for (Eigen::Index j = 0; j < u.size(); ++j) u(j) = lo(j) + (hi(j) - lo(j)) * unit(rng);
      bool in_s = true;
      for (const auto& p : s.polys) in_s = in_s && p.evaluate(u) <= 1e-9;
      agree += (in_s == contains(r, u));
      ++total;
    }
    CHECK(agree == total);
  }
}

TEST_CASE("samples lie in the region and are reproducible") {
  for (const auto& r : zoo()) {
    const auto pts = sample(r, 200, 42);
    REQUIRE(pts.size() == 200);
    for (const auto& u : pts) CHECK(contains(r, u));
    const auto again = sample(r, 200, 42);
    CHECK(again.front().isApprox(pts.front()));
    CHECK(again.back().isApprox(pts.back()));
  }
}

TEST_CASE("bounding boxes enclose samples") {
  for (const auto& r : zoo()) {
    const Box bb = bounding_box(r);
    for (const auto& u : sample(r, 100, 9)) {
      CHECK(((u - bb.lo).array() >= -1e-9).all());
      CHECK(((bb.hi - u).array() >= -1e-9).all());
    }
  }
  const Box bb = bounding_box(Ball{vec({5, 5}), 5});
  CHECK(bb.lo.isApprox(vec({0, 0})));
  CHECK(bb.hi.isApprox(vec({10, 10})));
}

TEST_CASE("compactness certificate respects the bounding box") {
  const Semialgebraic s = to_semialgebraic(Box{vec({-1, -1}), vec({1, 2})});
  CHECK(code_of([&] { add_compactness_certificate(s, 4.0); }) == ErrorCode::kInvalidBound);
  const Semialgebraic t = add_compactness_certificate(s, 5.0);
  CHECK(t.polys.size() == s.polys.size() + 1);
  CHECK(t.polys.back().evaluate(vec({1, 2})) == doctest::Approx(0.0));
}

TEST_CASE("monomial moments of intervals and boxes") {
  const auto m = monomial_moments(Interval{-1, 0}, {{0}, {1}, {2}, {3}});
  CHECK(m(0) == doctest::Approx(1.0));
  CHECK(m(1) == doctest::Approx(-0.5));
  CHECK(m(2) == doctest::Approx(1.0 / 3.0));
  CHECK(m(3) == doctest::Approx(-0.25));
  const auto b = monomial_moments(Box{vec({0, 0}), vec({1, 2})}, {{1, 1}, {0, 2}});
  CHECK(b(0) == doctest::Approx(0.5 * 2.0));
  CHECK(b(1) == doctest::Approx(8.0 / 3.0));
  CHECK(volume(Box{vec({0, 0}), vec({1, 2})}) == doctest::Approx(2.0));
  CHECK(code_of([] { monomial_moments(Ball{vec({0}), 1}, {{1}}); }) == ErrorCode::kUnsupportedRegion);
}

TEST_CASE("region JSON round trip") {
  for (const auto& r : zoo()) {
    const auto j = to_json(r);
    CHECK(to_json(region_from_json(j)) == j);
  }
  CHECK(code_of([] { region_from_json({{"type", "torus"}}); }) == ErrorCode::kParseError);
  CHECK(code_of([] { region_from_json({{"type", "ball"}}); }) == ErrorCode::kParseError);
}

TEST_CASE("affine moment transform on [0, 25]") {
  const MomentTransform t = moment_interval_transform(0.0, 25.0, 3);
  Matrix D(3, 3);
  D << 12.5, 0, 0, 312.5, 156.25, 0, 5859.375, 5859.375, 1953.125;
  CHECK((t.D - D).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((t.d - vec({12.5, 156.25, 1953.125})).cwiseAbs().maxCoeff() < 1e-9);
  for (double s : {-1.0, -0.3, 0.0, 0.7, 1.0}) {
    const double u = t.to_source(s);
    const Vector lifted = t.apply(MomentTransform::lift(s, 3));
    CHECK(lifted(0) == doctest::Approx(u));
    CHECK(lifted(1) == doctest::Approx(u * u));
    CHECK(lifted(2) == doctest::Approx(u * u * u));
  }
}

TEST_CASE("moment set matrix of degree 3") {
  const MomentSetZ z = build_moment_set(3);
  Matrix M(7, 4);
  M << 1, 0, 0, 0,
       0, 2, 0, 0,
       3, 0, 4, 0,
       0, 4, 0, 8,
       3, 0, 4, 0,
       0, 2, 0, 0,
       1, 0, 0, 0;
  CHECK((z.M - M).cwiseAbs().maxCoeff() == 0.0);
  const MomentDual dual = moment_dual(z);
  REQUIRE(dual.b.size() >= 1);
  CHECK(dual.b(0) == 1.0);
  CHECK(dual.b.tail(dual.b.size() - 1).isZero());
  CHECK(dual.C.size() == 3);
}

TEST_CASE("point masses represent the lifted curve") {
  for (int deg : {1, 2, 3, 5}) {
    const MomentSetZ z = build_moment_set(deg);
    for (double s : {-1.0, -0.6, 0.0, 0.25, 1.0}) {
      const Vector lambda = z.point_lambda(s);
      const Vector img = z.M.transpose() * lambda;
      CHECK(img(0) == doctest::Approx(1.0));
      for (int j = 1; j <= deg; ++j) CHECK(img(j) == doctest::Approx(std::pow(s, j)).epsilon(1e-10));
      const Eigen::SelfAdjointEigenSolver<Matrix> es(z.hankel(lambda));
      CHECK(es.eigenvalues().minCoeff() >= -1e-12);
      // the dual data reproduce the same point
      const MomentDual dual = moment_dual(z);
      const Matrix X = z.hankel(lambda);
      for (std::size_t i = 0; i < dual.A.size(); ++i) {
        CHECK((dual.A[i].cwiseProduct(X)).sum() == doctest::Approx(dual.b(static_cast<Eigen::Index>(i))).epsilon(1e-10));
      }
      for (int j = 0; j < deg; ++j) {
        CHECK((dual.C[j].cwiseProduct(X)).sum() == doctest::Approx(std::pow(s, j + 1)).epsilon(1e-10));
      }
    }
  }
}
