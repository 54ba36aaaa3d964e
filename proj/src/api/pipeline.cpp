#include "paretoaro/api/pipeline.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "paretoaro/common/error.hpp"

namespace paretoaro::api {

namespace {

using Clock = std::chrono::steady_clock;

int num_objectives(const molp::Molp& p) { return static_cast<int>(p.objectives.size()); }

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void check_inputs(const ApproximationRequest& request) {
  const auto issues = molp::validate(request.problem);
  if (!issues.empty()) {
    std::string msg = "invalid problem:";
    for (const auto& s : issues) msg += " " + s + ";";
    fail(ErrorCode::kInvalidArgument, msg);
  }
  regions::validate(request.region);
  require(regions::dimension(request.region) == num_objectives(request.problem) - 1,
          ErrorCode::kDimensionMismatch, "region dimension must be k - 1");
}

SolverReport report(const conic::ConicSolution& s) {
  return {conic::to_string(s.status), s.iterations, s.primal_residual, s.dual_residual, s.gap};
}

void record_psd(ApproximationResult& out, const conic::ConicProgram& program,
                const std::map<std::string, Matrix>& blocks) {
  for (const auto& b : program.blocks()) {
    if (b.cone == conic::Cone::kPsd) out.psd_orders.push_back(b.size);
  }
  for (const auto& [name, m] : blocks) {
    if (m.rows() == 0) continue;
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    out.psd_min_eigenvalue[name] = es.eigenvalues().minCoeff();
  }
}

SoundnessReport check_soundness(const molp::Molp& p, const regions::Region& region, const rule::PolynomialRule& rule,
                                int samples, std::uint64_t seed, double tol, TightnessReport& tight,
                                double tight_threshold) {
  SoundnessReport s;
  const auto pts = regions::sample(region, samples, seed);
  s.samples = static_cast<int>(pts.size());
  tight.max_gap = -std::numeric_limits<double>::infinity();
  for (const auto& u : pts) {
    const Vector x = rule.evaluate(u);
    const Vector slack = p.A * x - p.b;
    s.max_violation = std::max(s.max_violation, slack.maxCoeff());
    for (int i = 0; i + 1 < num_objectives(p); ++i) {
      const double fi = p.objectives[i].dot(x);
      s.max_violation = std::max(s.max_violation, fi - u(i));
      tight.max_gap = std::max(tight.max_gap, u(i) - fi);
    }
  }
  s.passed = s.max_violation <= tol;
  tight.ips_dominated = tight.max_gap > tight_threshold;
  return s;
}

// Points of the bounding box that are most demanding in one coordinate and
// lenient in the others.
std::vector<Vector> corner_points(const regions::Region& region) {
  const regions::Box box = regions::bounding_box(region);
  std::vector<Vector> pts;
  for (Eigen::Index i = 0; i < box.lo.size(); ++i) {
    Vector u = box.hi;
    u(i) = box.lo(i);
    pts.push_back(u);
  }
  return pts;
}

InfeasibilityDiagnosis diagnose(const ApproximationRequest& request) {
  InfeasibilityDiagnosis d;
  d.hypotheses = {
      "region_too_optimistic: the region may contain u for which no x satisfies (c^i)'x <= u_i and Ax <= b",
      "parameterization_too_weak: a rule of higher degree may be feasible on this region"};
  bool any_infeasible = false;
  for (const auto& u : corner_points(request.region)) {
    const auto r = molp::scalarize_epsilon_constraint(request.problem, u);
    CornerCheck c{u, molp::to_string(r.status), std::nullopt};
    if (r.f) c.value = (*r.f)(r.f->size() - 1);
    any_infeasible = any_infeasible || r.status == molp::ScalarizationStatus::kInfeasible;
    d.corners.push_back(std::move(c));
  }
  d.hint = any_infeasible ? "heuristic: a corner scalarization is infeasible, so the region contains unattainable points"
                          : "heuristic: all corner scalarizations are feasible; try a higher degree";
  return d;
}

// Tensor grid with `per_dim` points per coordinate over the box.
std::vector<Vector> box_grid(const regions::Box& box, int per_dim) {
  const auto dim = box.lo.size();
  std::vector<Vector> pts;
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  while (true) {
    Vector u(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double t = per_dim == 1 ? 0.5 : static_cast<double>(idx[j]) / (per_dim - 1);
      u(j) = box.lo(j) + t * (box.hi(j) - box.lo(j));
    }
    pts.push_back(u);
    Eigen::Index j = 0;
    for (; j < dim; ++j) {
      if (++idx[j] < per_dim) break;
      idx[j] = 0;
    }
    if (j == dim) break;
  }
  return pts;
}

ApproximationResult start(const ApproximationRequest& request) {
  ApproximationResult out;
  out.request = request;
  return out;
}

}  // namespace

conic::ConicProgram build_program(const ApproximationRequest& request) {
  check_inputs(request);
  switch (request.task) {
    case Task::kInner: {
      auto plan = robust::plan(request.problem, request.region, request.degree, request.shape, request.objective,
                                  request.method);
      plan.epsilon = request.epsilon;
      return robust::build_inner(request.problem, request.region, plan).program();
    }
    case Task::kOuter:
      robust::plan_outer(request.problem, request.region, request.degree);
      return robust::build_outer_linear(request.problem, request.region).program;
    case Task::kCertificate:
      require(request.bound.has_value(), ErrorCode::kInvalidArgument, "certificate request needs a bound");
      return robust::build_certificate_dominated(request.problem, request.region, *request.bound, request.degree)
          .program();
  }
  fail(ErrorCode::kInvalidArgument, "unknown task");
}

ApproximationResult approximate_inner(const ApproximationRequest& request, const PipelineOptions& options) {
  require(request.task == Task::kInner, ErrorCode::kInvalidArgument, "request task must be inner");
  check_inputs(request);
  ApproximationResult out = start(request);
  auto t0 = Clock::now();
  out.plan = robust::plan(request.problem, request.region, request.degree, request.shape, request.objective,
                                  request.method);
  out.plan.epsilon = request.epsilon;
  const robust::RuleModel model = robust::build_inner(request.problem, request.region, out.plan);
  out.timings["build_ms"] = ms_since(t0);

  t0 = Clock::now();
  const conic::ConicSolution sol = conic::solve(model.program(), options.solver);
  out.timings["solve_ms"] = ms_since(t0);
  out.solver = report(sol);

  switch (sol.status) {
    case conic::Status::kInfeasible:
      out.status = "infeasible";
      t0 = Clock::now();
      out.diagnosis = diagnose(request);
      out.timings["diagnosis_ms"] = ms_since(t0);
      return out;
    case conic::Status::kUnbounded: out.status = "unbounded"; return out;
    case conic::Status::kStalled: fail(ErrorCode::kSolverFailure, "conic solver did not converge");
    case conic::Status::kOptimal:
    case conic::Status::kNearOptimal: break;
  }

  t0 = Clock::now();
  const robust::RecoveredRule rec = robust::recover_rule(model, sol);
  out.rule = rec.rule;
  out.objective = sol.primal_objective;
  record_psd(out, model.program(), rec.psd);
  TightnessReport tight;
  out.soundness = check_soundness(request.problem, request.region, rec.rule, request.check_samples, request.seed,
                                  options.soundness_tol, tight, options.tightness_threshold);
  out.tightness = tight;
  out.timings["checks_ms"] = ms_since(t0);
  out.status = out.soundness->passed ? conic::to_string(sol.status) : "unsound";
  return out;
}

ApproximationResult approximate_outer(const ApproximationRequest& request, const PipelineOptions& options) {
  require(request.task == Task::kOuter, ErrorCode::kInvalidArgument, "request task must be outer");
  check_inputs(request);
  ApproximationResult out = start(request);
  auto t0 = Clock::now();
  out.plan = robust::plan_outer(request.problem, request.region, request.degree);
  const robust::OuterModel model = robust::build_outer_linear(request.problem, request.region);
  out.timings["build_ms"] = ms_since(t0);

  t0 = Clock::now();
  const conic::ConicSolution sol = conic::solve(model.program, options.solver);
  out.timings["solve_ms"] = ms_since(t0);
  out.solver = report(sol);
  switch (sol.status) {
    case conic::Status::kInfeasible: out.status = "infeasible"; return out;
    case conic::Status::kUnbounded: out.status = "unbounded"; return out;
    case conic::Status::kStalled: fail(ErrorCode::kSolverFailure, "conic solver did not converge");
    case conic::Status::kOptimal:
    case conic::Status::kNearOptimal: break;
  }
  const robust::AffineFunction ell = robust::recover_outer(model, sol);
  out.outer = ell;
  out.objective = -sol.primal_objective;
  out.status = conic::to_string(sol.status);

  t0 = Clock::now();
  const regions::Box box = regions::bounding_box(request.region);
  const int k = num_objectives(request.problem);
  const int per_dim = k == 2 ? options.tangency_grid : std::min(options.tangency_grid, 41);
  const auto grid = box_grid(box, per_dim);
  OuterReport rep;
  rep.min_gap = std::numeric_limits<double>::infinity();
  rep.max_violation = -std::numeric_limits<double>::infinity();
  for (const auto& pt : molp::pareto_front_oracle(request.problem, grid)) {
    ++rep.grid_points;
    if (!pt.feasible) {
      ++rep.infeasible_points;
      continue;
    }
    const double gap = pt.value - ell(pt.u);
    if (gap < rep.min_gap) {
      rep.min_gap = gap;
      rep.tangency = pt.u;
    }
    rep.max_violation = std::max(rep.max_violation, -gap);
  }
  for (int i = 0; i + 1 < k; ++i) {
    const auto range = molp::objective_range(request.problem, i);
    if (!range) continue;
    if (box.lo(i) < range->first - 1e-9) {
      rep.notes.push_back("part of the outer approximation is meaningless: u_" + std::to_string(i + 1) + " < " +
                          std::to_string(range->first) + " is not attainable");
    }
    if (box.hi(i) > range->second + 1e-9) {
      rep.notes.push_back("part of the outer approximation is meaningless: u_" + std::to_string(i + 1) + " > " +
                          std::to_string(range->second) + " exceeds the objective range");
    }
  }
  rep.meaningless = !rep.notes.empty() || rep.infeasible_points > 0;
  out.outer_report = std::move(rep);
  out.timings["checks_ms"] = ms_since(t0);
  return out;
}

ApproximationResult certify_dominated(const ApproximationRequest& request, const PipelineOptions& options) {
  require(request.task == Task::kCertificate, ErrorCode::kInvalidArgument, "request task must be certificate");
  require(request.bound.has_value(), ErrorCode::kInvalidArgument, "certificate request needs a bound");
  check_inputs(request);
  ApproximationResult out = start(request);
  auto t0 = Clock::now();
  out.plan = robust::plan_certificate(request.problem, request.region, request.degree, request.bound->degree());
  const robust::RuleModel model =
      robust::build_certificate_dominated(request.problem, request.region, *request.bound, request.degree);
  out.timings["build_ms"] = ms_since(t0);

  t0 = Clock::now();
  const conic::ConicSolution sol = conic::solve(model.program(), options.solver);
  out.timings["solve_ms"] = ms_since(t0);
  out.solver = report(sol);
  if (sol.status == conic::Status::kStalled) fail(ErrorCode::kSolverFailure, "conic solver did not converge");
  if (!conic::solved(sol.status)) {
    out.status = "no_certificate";
    return out;
  }
  const robust::RecoveredRule rec = robust::recover_rule(model, sol);
  out.rule = rec.rule;
  record_psd(out, model.program(), rec.psd);
  TightnessReport tight;
  out.soundness = check_soundness(request.problem, request.region, rec.rule, request.check_samples, request.seed,
                                  options.soundness_tol, tight, options.tightness_threshold);
  out.status = out.soundness->passed ? "certified" : "unsound";
  return out;
}

ApproximationResult run(const ApproximationRequest& request, const PipelineOptions& options) {
  switch (request.task) {
    case Task::kInner: return approximate_inner(request, options);
    case Task::kOuter: return approximate_outer(request, options);
    case Task::kCertificate: return certify_dominated(request, options);
  }
  fail(ErrorCode::kInvalidArgument, "unknown task");
}

}  // namespace paretoaro::api
