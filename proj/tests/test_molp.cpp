#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "paretoaro/common/error.hpp"
#include "paretoaro/molp/molp.hpp"
#include "support/fixtures.hpp"

using namespace paretoaro;
using fixtures::instance_r;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("validate reports violations by field") {
  molp::Molp p = instance_r();
  CHECK(molp::validate(p).empty());

  molp::Molp one = p;
  one.objectives.pop_back();
  const auto v1 = molp::validate(one);
  REQUIRE(v1.size() == 1);
  CHECK(v1[0] == "k must be >= 2");

  molp::Molp consistent;
  consistent.A = Matrix::Ones(3, 2);
  consistent.b = Vector::Ones(3);
  consistent.objectives = {Vector::Ones(2), Vector::Ones(2)};
  CHECK(molp::validate(consistent).empty());

  molp::Molp nan = p;
  nan.b(2) = std::numeric_limits<double>::quiet_NaN();
  const auto v2 = molp::validate(nan);
  REQUIRE(v2.size() == 1);
  CHECK(v2[0] == "b[2] not finite");

  molp::Molp dims = p;
  dims.b = Vector::Ones(3);
  CHECK_FALSE(molp::validate(dims).empty());
}

TEST_CASE("epsilon-constraint scalarization matches vertex enumeration") {
  const molp::Molp p = instance_r();
  for (double u : {0.0, -1.0, -0.5, -0.25, -0.8}) {
    const auto r = molp::scalarize_epsilon_constraint(p, vec({u}));
    const auto oracle = fixtures::vertex_front_2d(p, vec({u}));
    REQUIRE(oracle.has_value());
    REQUIRE(r.status == molp::ScalarizationStatus::kOptimal);
    REQUIRE(r.x.has_value());
    CHECK(((p.A * *r.x - p.b).array() <= molp::kFeasTol).all());
    CHECK((*r.f)(1) == doctest::Approx(*oracle).epsilon(1e-8));
  }
  const auto r0 = molp::scalarize_epsilon_constraint(p, vec({0.0}));
  CHECK((*r0.f)(0) == doctest::Approx(0.0).epsilon(1e-8));
  CHECK((*r0.f)(1) == doctest::Approx(-0.75).epsilon(1e-8));
  const auto r1 = molp::scalarize_epsilon_constraint(p, vec({-1.0}));
  CHECK((*r1.f)(0) == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(std::abs((*r1.f)(1)) < 1e-8);

  const auto r2 = molp::scalarize_epsilon_constraint(p, vec({-2.0}));
  CHECK(r2.status == molp::ScalarizationStatus::kInfeasible);
  CHECK_FALSE(r2.x.has_value());
  CHECK_FALSE(fixtures::vertex_front_2d(p, vec({-2.0})).has_value());
}

TEST_CASE("pareto front oracle on grids") {
  const molp::Molp p = instance_r();
  const auto front = molp::pareto_front_oracle(p, {vec({-1}), vec({-0.5}), vec({0})});
  REQUIRE(front.size() == 3);
  const double expected[] = {0.0, -0.5, -0.75};
  for (int i = 0; i < 3; ++i) {
    CHECK(front[i].feasible);
    CHECK(front[i].value == doctest::Approx(expected[i]).epsilon(1e-8));
  }
  const auto q = molp::pareto_front_oracle(p, {vec({-0.25})});
  CHECK(q[0].value == doctest::Approx(-0.625).epsilon(1e-8));

  const auto flagged = molp::pareto_front_oracle(p, {vec({-0.5}), vec({-3.0})});
  CHECK(flagged[0].feasible);
  CHECK_FALSE(flagged[1].feasible);
}

TEST_CASE("oracle front is nonincreasing and convex") {
  const molp::Molp p = instance_r();
  const auto grid = fixtures::line_grid(-1.0, 0.0, 41);
  const auto front = molp::pareto_front_oracle(p, grid);
  for (std::size_t i = 0; i + 1 < front.size(); ++i) CHECK(front[i + 1].value <= front[i].value + 1e-9);
  for (std::size_t i = 1; i + 1 < front.size(); ++i) {
    const double chord = 0.5 * (front[i - 1].value + front[i + 1].value);
    CHECK(front[i].value <= chord + 1e-9);
    CHECK(front[i].value == doctest::Approx(fixtures::front_r(grid[i](0))).epsilon(1e-8));
  }
}

TEST_CASE("dominance relation") {
  CHECK(molp::dominates(vec({0, 0}), vec({1, 1})) == molp::Dominance::kStrong);
  CHECK(molp::dominates(vec({0, 1}), vec({0, 2})) == molp::Dominance::kWeak);
  CHECK(molp::dominates(vec({0, 1}), vec({1, 0})) == molp::Dominance::kNone);
  CHECK(molp::dominates(vec({1, 1}), vec({1, 1})) == molp::Dominance::kNone);
  CHECK_THROWS_AS(molp::dominates(vec({0, 1}), vec({0, 1, 2})), Error);
}

TEST_CASE("strong dominance is irreflexive and transitive") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> d(0, 3);
  auto point = [&] { return vec({double(d(rng)), double(d(rng)), double(d(rng))}); };
  for (int t = 0; t < 2000; ++t) {
    const Vector a = point(), b = point(), c = point();
    CHECK(molp::dominates(a, a) != molp::Dominance::kStrong);
    if (molp::dominates(a, b) == molp::Dominance::kStrong && molp::dominates(b, c) == molp::Dominance::kStrong) {
      CHECK(molp::dominates(a, c) == molp::Dominance::kStrong);
    }
  }
}

TEST_CASE("problem JSON round trip and parse errors") {
  molp::Molp p = instance_r();
  p.names = {"f1", "f2"};
  const auto j = molp::to_json(p);
  const molp::Molp q = molp::from_json(j);
  CHECK(q.A.isApprox(p.A));
  CHECK(q.b.isApprox(p.b));
  CHECK(q.names == p.names);
  CHECK(molp::to_json(q) == j);
  CHECK_THROWS_AS(molp::from_json(nlohmann::json{{"A", {{1}}}}), Error);
  CHECK_THROWS_AS(molp::from_json(nlohmann::json::array()), Error);
}

TEST_CASE("objective ranges") {
  const auto r = molp::objective_range(instance_r(), 0);
  REQUIRE(r.has_value());
  CHECK(r->first == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(std::abs(r->second) < 1e-8);
}
