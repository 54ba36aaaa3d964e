#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <functional>
#include <thread>

#include "paretoaro/api/grid.hpp"
#include "paretoaro/api/pipeline.hpp"
#include "paretoaro/api/run_store.hpp"
#include "paretoaro/common/error.hpp"
#include "support/fixtures.hpp"

using namespace paretoaro;
using namespace paretoaro::api;

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

ApproximationRequest request_r(int degree, regions::Region region = regions::Interval{-1, 0}) {
  ApproximationRequest r;
  r.problem = fixtures::instance_r();
  r.region = region;
  r.degree = degree;
  return r;
}

ApproximationRequest request_orthant(int degree) {
  ApproximationRequest r;
  r.problem = fixtures::instance_orthant();
  r.region = regions::Ball{vec({5, 5}), 5.0};
  r.degree = degree;
  r.objective = robust::ObjectiveMode::sampling(1000, 3);
  return r;
}

// Composite Simpson rule for the objective curve (c^k)'x(u) on [a, b].
double curve_integral(const ApproximationResult& res, double a, double b) {
  const int n = 2000;
  const double h = (b - a) / n;
  const Vector& ck = res.request.problem.objectives.back();
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * ck.dot(res.rule->evaluate(vec({a + i * h})));
  }
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("inner pipeline on instance R") {
  const ApproximationResult res = run(request_r(1));
  CHECK(res.status == "optimal");
  CHECK(res.success());
  REQUIRE(res.objective.has_value());
  CHECK(*res.objective == doctest::Approx(-0.375).epsilon(1e-6));
  // the line -0.75u - 0.75 integrates to -0.375 on [-1, 0]
  CHECK(curve_integral(res, -1.0, 0.0) == doctest::Approx(-0.375).epsilon(1e-6));
  REQUIRE(res.soundness.has_value());
  CHECK(res.soundness->passed);
  CHECK(res.soundness->samples == 1000);
  CHECK(res.soundness->max_violation <= 1e-6);
  REQUIRE(res.tightness.has_value());
  CHECK(res.timings.count("solve_ms") == 1);
  CHECK(res.plan.method == robust::Method::kLinearPolyhedralLp);
}

TEST_CASE("unattainable region is diagnosed") {
  const ApproximationResult res = run(request_r(1, regions::Interval{-3, -2}));
  CHECK(res.status == "infeasible");
  CHECK_FALSE(res.success());
  CHECK_FALSE(res.rule.has_value());
  REQUIRE(res.diagnosis.has_value());
  CHECK(res.diagnosis->hypotheses.size() == 2);
  CHECK_FALSE(res.diagnosis->corners.empty());
  for (const auto& c : res.diagnosis->corners) CHECK(c.status == "infeasible");
  CHECK_FALSE(res.diagnosis->hint.empty());
}

TEST_CASE("three-objective pipeline reports its PSD blocks") {
  const ApproximationResult res = run(request_orthant(2));
  CHECK(res.success());
  CHECK(res.plan.method == robust::Method::kQuadEllipsoidSdp);
  CHECK(res.psd_orders.size() == 12);
  for (int o : res.psd_orders) CHECK(o == 3);
  CHECK(res.psd_min_eigenvalue.size() == 12);
  for (const auto& [name, ev] : res.psd_min_eigenvalue) CHECK(ev >= -1e-8);
}

TEST_CASE("outer pipeline tangency and meaningless flag") {
  ApproximationRequest req = request_r(1);
  req.task = Task::kOuter;
  const ApproximationResult res = run(req);
  CHECK(res.status == "optimal");
  REQUIRE(res.outer.has_value());
  REQUIRE(res.outer_report.has_value());
  CHECK(std::abs(res.outer_report->tangency(0) + 0.5) <= 1e-3);
  CHECK(res.outer_report->max_violation <= 1e-6);
  CHECK(res.outer_report->grid_points == 201);
  CHECK_FALSE(res.outer_report->meaningless);

  req.region = regions::Interval{-1.5, 0.5};
  const ApproximationResult wide = run(req);
  REQUIRE(wide.outer_report.has_value());
  CHECK(wide.outer_report->meaningless);
  REQUIRE_FALSE(wide.outer_report->notes.empty());
  CHECK(wide.outer_report->notes.front().find("meaningless") != std::string::npos);

  req.degree = 2;
  CHECK(code_of([&] { run(req); }) == ErrorCode::kUnsupported);
}

TEST_CASE("certificate verdicts through the pipeline") {
  ApproximationRequest req = request_r(1, regions::Interval{-1, -0.9});
  req.task = Task::kCertificate;
  rule::Polynomial zero(1);
  zero.add_term({0}, 0.0);
  req.bound = zero;
  const ApproximationResult ok = run(req);
  CHECK(ok.status == "certified");
  CHECK(ok.rule.has_value());

  rule::Polynomial minus_one(1);
  minus_one.add_term({0}, -1.0);
  req.bound = minus_one;
  req.region = regions::Interval{-1, 0};
  for (int d = 1; d <= 3; ++d) {
    req.degree = d;
    const ApproximationResult no = run(req);
    CHECK(no.status == "no_certificate");
    CHECK_FALSE(no.rule.has_value());
  }
  req.bound.reset();
  CHECK(code_of([&] { run(req); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("surface evaluation") {
  const ApproximationResult res = run(request_r(1));
  const Mesh mesh = evaluate_surface(res, make_grid(res.request.region, "3"), true);
  REQUIRE(mesh.points.size() == 3);
  const double expected[3][2] = {{-1, 0}, {-0.5, -0.375}, {0, -0.75}};
  for (int i = 0; i < 3; ++i) {
    CHECK(mesh.points[i].u(0) == doctest::Approx(expected[i][0]));
    CHECK(mesh.points[i].value == doctest::Approx(expected[i][1]).epsilon(1e-6));
    REQUIRE(mesh.points[i].oracle.has_value());
    CHECK(*mesh.points[i].oracle == doctest::Approx(fixtures::front_r(expected[i][0])).epsilon(1e-8));
  }
  CHECK(mesh.has_oracle);
  CHECK(code_of([&] { evaluate_surface(res, {}); }) == ErrorCode::kBadGrid);
  CHECK(code_of([&] { make_grid(res.request.region, "x"); }) == ErrorCode::kBadGrid);
  CHECK(code_of([&] { make_grid(res.request.region, "0"); }) == ErrorCode::kBadGrid);
  CHECK(tensor_grid("0:1:3,0:2:5").size() == 15);

  const ApproximationResult quad = run(request_orthant(2));
  const Mesh m3 = evaluate_surface(quad, make_grid(quad.request.region, "20"));
  CHECK(m3.points.size() == 400);
  for (const auto& p : m3.points) {
    const Vector x = quad.rule->evaluate(p.u);
    CHECK((quad.request.problem.A * x - quad.request.problem.b).maxCoeff() <= 1e-6);
    CHECK(p.objectives.size() == 3);
  }

  ApproximationRequest oreq = request_r(1);
  oreq.task = Task::kOuter;
  const ApproximationResult outer = run(oreq);
  const Mesh lm = evaluate_surface(outer, make_grid(oreq.region, "5"));
  for (const auto& p : lm.points) CHECK(p.value == doctest::Approx((*outer.outer)(p.u)));
}

TEST_CASE("refine clones the request on a subregion") {
  const ApproximationResult parent = run(request_r(2));
  const ApproximationRequest child = refine(parent, regions::Interval{-0.6, -0.4});
  CHECK(child.degree == 2);
  CHECK(regions::to_json(child.region) == regions::to_json(regions::Region{regions::Interval{-0.6, -0.4}}));
  CHECK(molp::to_json(child.problem) == molp::to_json(parent.request.problem));
  CHECK(refine(parent, regions::Interval{-0.6, -0.4}, 4).degree == 4);
  CHECK(code_of([&] { refine(parent, regions::Interval{-2, -1.5}); }) == ErrorCode::kNotContained);

  // the child optimizes the subinterval directly, so it is at least as good per unit length
  const ApproximationResult sub = run(child);
  REQUIRE(sub.objective.has_value());
  CHECK(*sub.objective / 0.2 <= curve_integral(parent, -0.6, -0.4) / 0.2 + 1e-6);

  const ApproximationResult ball = run(request_orthant(2));
  CHECK_NOTHROW(refine(ball, regions::Ball{vec({5, 5}), 2.5}));
  CHECK(code_of([&] { refine(ball, regions::Ball{vec({5, 5}), 6}); }) == ErrorCode::kNotContained);
}

TEST_CASE("identical requests give identical rules") {
  const auto a = run(request_orthant(2));
  const auto b = run(request_orthant(2));
  CHECK(rule::to_json(*a.rule).dump() == rule::to_json(*b.rule).dump());
  const auto c = run(request_r(3));
  const auto d = run(request_r(3));
  CHECK(rule::to_json(*c.rule).dump() == rule::to_json(*d.rule).dump());
}

TEST_CASE("request and result JSON round trips") {
  ApproximationRequest req = request_orthant(2);
  req.shape = robust::Shape::kConvex;
  req.seed = 9;
  const auto j = to_json(req);
  CHECK(j.at("v") == kSchemaVersion);
  CHECK(to_json(request_from_json(j)) == j);

  const ApproximationResult res = run(request_r(2));
  const auto rj = to_json(res);
  CHECK(rj.at("v") == kSchemaVersion);
  CHECK(to_json(result_from_json(rj)) == rj);

  ApproximationRequest oreq = request_r(1);
  oreq.task = Task::kOuter;
  const auto oj = to_json(run(oreq));
  CHECK(to_json(result_from_json(oj)) == oj);

  CHECK(code_of([] { request_from_json(nlohmann::json::object()); }) == ErrorCode::kParseError);
  nlohmann::json ref = to_json(request_r(1));
  ref["molp"] = {{"ref", "p.json"}};
  CHECK(code_of([&] { request_from_json(ref); }) == ErrorCode::kParseError);
}

TEST_CASE("run store persists documents by content hash") {
  const auto dir = std::filesystem::temp_directory_path() / "paretoaro_store_test";
  std::filesystem::remove_all(dir);
  const nlohmann::json doc = {{"a", 1}, {"b", {1, 2, 3}}};
  const std::string key = RunStore::key(doc);
  CHECK(key.size() == 16);
  CHECK(key == RunStore::key(nlohmann::json::parse(doc.dump())));
  CHECK(key != RunStore::key({{"a", 2}}));
  CHECK(fnv1a64("") == 14695981039346656037ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  {
    RunStore store(dir.string());
    store.put(key, doc);
    CHECK(store.contains(key));
    CHECK(*store.get(key) == doc);
    CHECK_FALSE(store.get("missing").has_value());
  }
  RunStore reopened(dir.string());
  CHECK(reopened.keys() == std::vector<std::string>{key});
  CHECK(*reopened.get(key) == doc);

  // concurrent writers to one key leave a readable document
  std::vector<std::thread> writers;
  for (int t = 0; t < 4; ++t) {
    writers.emplace_back([&reopened, &key, t] {
      for (int i = 0; i < 20; ++i) reopened.put(key, {{"writer", t}, {"i", i}});
    });
  }
  for (auto& w : writers) w.join();
  RunStore again(dir.string());
  CHECK(again.get(key)->at("i") == 19);
  std::filesystem::remove_all(dir);
}
