// One line per acceptance criterion; exits nonzero when any criterion fails
// or exceeds its time limit.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "paretoaro/api/pipeline.hpp"
#include "paretoaro/conic/sdpa.hpp"
#include "paretoaro/conic/solver.hpp"
#include "paretoaro/conic/transform.hpp"
#include "paretoaro/regions/moments.hpp"
#include "paretoaro/robust/builders.hpp"
#include "paretoaro/robust/plan.hpp"
#include "support/fixtures.hpp"
#include "support/programs.hpp"

using namespace paretoaro;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Accumulates failed checks with a short reason each.
struct Verdict {
  std::vector<std::string> failures;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  bool passed() const { return failures.empty(); }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

api::ApproximationRequest request_r(int degree, regions::Region region = regions::Interval{-1, 0}) {
  api::ApproximationRequest r;
  r.problem = fixtures::instance_r();
  r.region = region;
  r.degree = degree;
  return r;
}

const regions::Region kBall = regions::Ball{vec({5, 5}), 5.0};
const robust::ObjectiveMode kBallObjective = robust::ObjectiveMode::sampling(1000, 3);

// One solved job of the soundness matrix.
struct Job {
  std::string name;
  molp::Molp problem;
  regions::Region region;
  conic::ConicProgram program;
  conic::ConicSolution solution;
  std::optional<rule::PolynomialRule> rule;
};

Job solve_job(std::string name, const molp::Molp& p, const regions::Region& region, int degree,
              robust::ObjectiveMode mode = {}, std::optional<robust::Method> method = std::nullopt) {
  const auto pl = robust::plan(p, region, degree, robust::Shape::kNone, mode, method);
  robust::RuleModel model = robust::build_inner(p, region, pl);
  Job job{std::move(name), p, region, model.program(), conic::solve(model.program()), std::nullopt};
  if (conic::solved(job.solution.status)) job.rule = robust::recover_rule(model, job.solution).rule;
  return job;
}

std::vector<Job> matrix;

Verdict golden_values() {
  Verdict v;
  const auto t = regions::moment_interval_transform(0.0, 25.0, 3);
  Matrix D(3, 3);
  D << 12.5, 0, 0, 312.5, 156.25, 0, 5859.375, 5859.375, 1953.125;
  v.require(t.D.rows() == 3 && t.D.cols() == 3 && (t.D - D).cwiseAbs().maxCoeff() <= 1e-12, "D");
  v.require(t.d.size() == 3 && (t.d - vec({12.5, 156.25, 1953.125})).cwiseAbs().maxCoeff() <= 1e-12, "d");

  const Vector w =
      robust::build_objective(fixtures::instance_r(), regions::Interval{0, 25}, rule::MonomialBasis(1, 3), {});
  const Vector expected = vec({25.0, 25.0 * 25.0 / 2.0, std::pow(25.0, 3) / 3.0, std::pow(25.0, 4) / 4.0});
  v.require(w.size() == 4 && ((w - expected).cwiseQuotient(expected)).cwiseAbs().maxCoeff() <= 1e-12,
            "objective coefficients");

  const auto z = regions::build_moment_set(3);
  Matrix M(7, 4);
  M << 1, 0, 0, 0, 0, 2, 0, 0, 3, 0, 4, 0, 0, 4, 0, 8, 3, 0, 4, 0, 0, 2, 0, 0, 1, 0, 0, 0;
  v.require(z.M.rows() == 7 && z.M.cols() == 4 && (z.M - M).cwiseAbs().maxCoeff() == 0.0, "moment map");
  const auto dual = regions::moment_dual(z);
  v.require(dual.b.size() == 4 && dual.b == vec({1, 0, 0, 0}), "moment-dual RHS");
  return v;
}

Verdict linear_rule() {
  Verdict v;
  const auto res = api::run(request_r(1));
  v.require(res.status == "optimal", "status " + res.status);
  if (!res.rule || !res.objective) return v.require(false, "no rule"), v;
  const Vector& c2 = res.request.problem.objectives[1];
  const double at_a = c2.dot(res.rule->evaluate(vec({-1.0})));
  const double at_b = c2.dot(res.rule->evaluate(vec({0.0})));
  v.require(std::abs(at_a - *fixtures::vertex_front_2d(res.request.problem, vec({-1.0}))) <= 1e-6, "endpoint -1");
  v.require(std::abs(at_b - *fixtures::vertex_front_2d(res.request.problem, vec({0.0}))) <= 1e-6, "endpoint 0");
  v.require(std::abs(at_a - 0.0) <= 1e-6 && std::abs(at_b + 0.75) <= 1e-6, "endpoint values");
  v.require(std::abs(*res.objective + 0.375) <= 1e-6, "objective " + fmt(*res.objective));
  v.detail = "curve(-1)=" + fmt(at_a) + " curve(0)=" + fmt(at_b) + " objective=" + fmt(*res.objective);
  return v;
}

Verdict soundness() {
  Verdict v;
  const auto r = fixtures::instance_r();
  const auto rnd = fixtures::instance_random();
  const auto orth = fixtures::instance_orthant();
  const regions::Region r_region = regions::Interval{-1, 0};
  const regions::Region rnd_region = fixtures::nonflat_interval(rnd);
  for (int d = 1; d <= 6; ++d) matrix.push_back(solve_job("R d" + std::to_string(d), r, r_region, d));
  for (int d = 1; d <= 6; ++d) matrix.push_back(solve_job("random d" + std::to_string(d), rnd, rnd_region, d));
  matrix.push_back(solve_job("orthant exact d2", orth, kBall, 2, kBallObjective, robust::Method::kQuadEllipsoidSdp));
  matrix.push_back(solve_job("orthant SOS d2", orth, kBall, 2, kBallObjective, robust::Method::kSosSemialgebraicSdp));
  matrix.push_back(solve_job("orthant SOS d4", orth, kBall, 4, kBallObjective, robust::Method::kSosSemialgebraicSdp));

  double worst_feas = -1e300, worst_front = -1e300;
  for (const auto& job : matrix) {
    if (!job.rule) {
      v.require(false, job.name + " not solved (" + conic::to_string(job.solution.status) + ")");
      continue;
    }
    const auto pts = regions::sample(job.region, 1000, 17);
    const double feas = fixtures::max_violation(job.problem, *job.rule, pts);
    worst_feas = std::max(worst_feas, feas);
    v.require(feas <= 1e-6, job.name + " feasibility " + fmt(feas));

    std::vector<std::optional<double>> front;
    if (job.problem.num_variables() == 2) {
      for (const auto& u : pts) front.push_back(fixtures::vertex_front_2d(job.problem, u));
    } else if (job.problem.objectives.size() == 3) {
      for (const auto& u : pts) front.push_back(fixtures::orthant_front(job.problem, u));
    } else {
      for (const auto& fp : molp::pareto_front_oracle(job.problem, pts)) {
        front.push_back(fp.feasible ? std::optional<double>(fp.value) : std::nullopt);
      }
    }
    const Vector& ck = job.problem.objectives.back();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!front[i]) {
        v.require(false, job.name + " oracle infeasible at a sample");
        break;
      }
      const double below = *front[i] - ck.dot(job.rule->evaluate(pts[i]));
      worst_front = std::max(worst_front, below);
      if (below > 1e-6) {
        v.require(false, job.name + " below the front by " + fmt(below));
        break;
      }
    }
  }
  v.detail = std::to_string(matrix.size()) + " jobs x 1000 samples, max constraint violation " + fmt(worst_feas) +
             ", max oracle - curve " + fmt(worst_front);
  return v;
}

Verdict monotonicity() {
  Verdict v;
  std::vector<double> obj;
  for (int d = 1; d <= 4; ++d) {
    const auto res = api::run(request_r(d));
    if (!res.success() || !res.objective) return v.require(false, "degree " + std::to_string(d) + " " + res.status), v;
    obj.push_back(*res.objective);
  }
  v.require(obj[0] - obj[1] >= 1e-4, "1 -> 2 decrease " + fmt(obj[0] - obj[1]));
  v.require(obj[2] <= obj[1] && obj[3] <= obj[2], "nonincreasing");
  v.detail = "objectives " + fmt(obj[0]) + " " + fmt(obj[1]) + " " + fmt(obj[2]) + " " + fmt(obj[3]);
  return v;
}

Verdict exact_vs_sos() {
  Verdict v;
  auto request = [](int degree, robust::Method m) {
    api::ApproximationRequest r;
    r.problem = fixtures::instance_orthant();
    r.region = kBall;
    r.degree = degree;
    r.objective = kBallObjective;
    r.method = m;
    return r;
  };
  const auto exact = api::run(request(2, robust::Method::kQuadEllipsoidSdp));
  const auto sos2 = api::run(request(2, robust::Method::kSosSemialgebraicSdp));
  const auto sos4 = api::run(request(4, robust::Method::kSosSemialgebraicSdp));
  for (const auto* r : {&exact, &sos2, &sos4}) {
    if (!r->success() || !r->objective) return v.require(false, "not solved: " + r->status), v;
  }
  v.require(std::abs(*exact.objective - *sos2.objective) <= 1e-4,
            "exact vs SOS d2 differ by " + fmt(std::abs(*exact.objective - *sos2.objective)));
  v.require(*sos4.objective <= *sos2.objective, "SOS d4 above d2");
  v.detail = "exact d2 " + fmt(*exact.objective) + ", SOS d2 " + fmt(*sos2.objective) + ", SOS d4 " +
             fmt(*sos4.objective);
  return v;
}

Verdict outer_tangency() {
  Verdict v;
  auto req = request_r(1);
  req.task = api::Task::kOuter;
  const auto res = api::run(req);
  if (!res.outer || !res.outer_report) return v.require(false, "no outer function: " + res.status), v;
  const double tangency = res.outer_report->tangency(0);
  v.require(std::abs(tangency + 0.5) <= 1e-3, "tangency " + fmt(tangency));
  double worst = -1e300;
  for (const auto& u : fixtures::line_grid(-1.0, 0.0, 100)) {
    worst = std::max(worst, (*res.outer)(u) - *fixtures::vertex_front_2d(req.problem, u));
  }
  v.require(worst <= 1e-6, "l above the front by " + fmt(worst));
  v.detail = "tangency " + fmt(tangency) + ", max l - oracle " + fmt(worst);
  return v;
}

rule::Polynomial constant_poly(double c) {
  rule::Polynomial t(1);
  t.add_term({0}, c);
  return t;
}

Verdict certificates() {
  Verdict v;
  auto req = request_r(1, regions::Interval{-1, -0.9});
  req.task = api::Task::kCertificate;
  req.bound = constant_poly(0.0);
  const auto zero = api::run(req);
  v.require(zero.status == "certified", "t = 0 gave " + zero.status);

  req.region = regions::Interval{-1, 0};
  req.bound = constant_poly(-1.0);
  for (int d = 1; d <= 3; ++d) {
    req.degree = d;
    const auto res = api::run(req);
    v.require(res.status == "no_certificate" && res.solver.status == "infeasible",
              "t = -1 at degree " + std::to_string(d) + " gave " + res.status + "/" + res.solver.status);
  }

  // least-squares cubic through front + 0.1 on a 201-point grid
  const auto grid = fixtures::line_grid(-1.0, 0.0, 201);
  Matrix V(201, 4);
  Vector y(201);
  for (int i = 0; i < 201; ++i) {
    for (int a = 0; a < 4; ++a) V(i, a) = std::pow(grid[i](0), a);
    y(i) = *fixtures::vertex_front_2d(req.problem, grid[i]) + 0.1;
  }
  const Vector coef = V.colPivHouseholderQr().solve(y);
  rule::Polynomial fit(1);
  for (int a = 0; a < 4; ++a) fit.add_term({a}, coef(a));
  req.bound = fit;
  req.degree = 3;
  const auto fitted = api::run(req);
  v.require(fitted.status == "certified", "fitted cubic gave " + fitted.status);
  v.detail = "certified / infeasible x3 / certified";
  return v;
}

Verdict shapes() {
  Verdict v;
  auto req = request_r(3);
  req.shape = robust::Shape::kBoth;
  const auto res = api::run(req);
  if (!res.rule) return v.require(false, "shaped degree 3 not solved: " + res.status), v;
  const int n = 100;
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) f[i] = req.problem.objectives[1].dot(res.rule->evaluate(vec({-1.0 + i / double(n - 1)})));
  double rise = -1e300, bend = 1e300;
  for (int i = 0; i + 1 < n; ++i) rise = std::max(rise, f[i + 1] - f[i]);
  for (int i = 1; i + 1 < n; ++i) bend = std::min(bend, f[i + 1] - 2 * f[i] + f[i - 1]);
  v.require(rise <= 1e-7, "first difference " + fmt(rise));
  v.require(bend >= -1e-7, "second difference " + fmt(bend));

  api::ApproximationRequest convex;
  convex.problem = fixtures::instance_orthant();
  convex.region = kBall;
  convex.degree = 2;
  convex.shape = robust::Shape::kConvex;
  convex.objective = kBallObjective;
  const auto cres = api::run(convex);
  if (!cres.rule) return v.require(false, "convex k = 3 not solved: " + cres.status), v;
  double min_eig = 1e300;
  for (const auto& g : rule::QuadraticRuleView::from_rule(*cres.rule).gamma) {
    min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Matrix>(g).eigenvalues().minCoeff());
  }
  v.require(min_eig >= -1e-8, "gamma min eigenvalue " + fmt(min_eig));
  v.detail = "max first difference " + fmt(rise) + ", min second difference " + fmt(bend) +
             ", min gamma eigenvalue " + fmt(min_eig);
  return v;
}

Verdict conic_infrastructure() {
  Verdict v;
  double worst_trip = 0.0;
  for (std::uint64_t seed = 200; seed < 250; ++seed) {
    const auto p = programs::random_native_program(seed);
    worst_trip = std::max(worst_trip, programs::program_distance(conic::import_sdpa(conic::export_sdpa(p)), p));
    const auto mixed = programs::random_program(seed);
    const std::string text = conic::export_sdpa(mixed);
    v.require(conic::export_sdpa(conic::import_sdpa(text)) == text, "mixed program " + std::to_string(seed));
  }
  v.require(worst_trip <= 1e-15, "round trip distance " + fmt(worst_trip));

  // the matrix of the soundness suite
  double worst_res = 0.0, worst_kkt = 0.0;
  if (matrix.empty()) v.require(false, "soundness matrix missing");
  for (const auto& job : matrix) {
    const auto& s = job.solution;
    v.require(s.status == conic::Status::kOptimal, job.name + " status " + conic::to_string(s.status));
    const double res = std::max({s.primal_residual, s.dual_residual, s.gap});
    worst_res = std::max(worst_res, res);
    v.require(res <= 1e-8, job.name + " residual " + fmt(res));
    const double kkt = programs::kkt_relative(job.program, s);
    worst_kkt = std::max(worst_kkt, kkt);
    v.require(kkt <= 1e-8, job.name + " recomputed KKT violation " + fmt(kkt));
  }

  double worst_duality = -1e300;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto p = programs::random_program(seed);
    const auto dp = conic::dualize(p);
    const auto s = conic::solve(p);
    const auto ds = conic::solve(dp);
    if (!conic::solved(s.status) || !conic::solved(ds.status)) {
      v.require(false, "dual pair " + std::to_string(seed) + " not solved");
      continue;
    }
    const double primal = conic::reported_objective(p, s), dual = conic::reported_objective(dp, ds);
    const double excess = (dual - primal) / (1.0 + std::abs(primal));
    worst_duality = std::max(worst_duality, excess);
    v.require(excess <= 1e-8, "dual above primal on pair " + std::to_string(seed));
  }
  v.detail = "round trip " + fmt(worst_trip) + ", max solver residual " + fmt(worst_res) +
             ", max recomputed KKT violation " + fmt(worst_kkt) + ", max (dual - primal) " + fmt(worst_duality);
  return v;
}

struct Criterion {
  const char* name;
  double limit_s;
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"golden moment and objective values", 1.0, golden_values},
      {"linear rule exactness on R", 1.0, linear_rule},
      {"soundness suite", 120.0, soundness},
      {"degree monotonicity on R", 30.0, monotonicity},
      {"exact vs SOS agreement for k = 3", 30.0, exact_vs_sos},
      {"outer tangency on R", 5.0, outer_tangency},
      {"certificate semantics on R", 5.0, certificates},
      {"shape constraints", 30.0, shapes},
      {"conic infrastructure", 60.0, conic_infrastructure},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_s) v.require(false, "over the time limit");
    std::ostringstream line;
    line << (v.passed() ? "PASS" : "FAIL") << "  " << c.name << "  [" << fmt(secs) << " s / " << c.limit_s
         << " s]";
    if (!v.detail.empty()) line << "  " << v.detail;
    for (const auto& f : v.failures) line << "\n      - " << f;
    std::printf("%s\n", line.str().c_str());
    std::fflush(stdout);
    if (!v.passed()) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
