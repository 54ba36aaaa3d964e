#include "paretoaro/robust/builders.hpp"

#include "paretoaro/common/error.hpp"

#include <cmath>

namespace paretoaro::robust {

using conic::Cone;
using conic::LinExpr;

Vector build_objective(const molp::Molp& problem, const regions::Region& region, const rule::MonomialBasis& basis,
                       const ObjectiveMode& mode) {
  require(regions::dimension(region) == basis.vars(), ErrorCode::kDimensionMismatch,
          "region dimension differs from rule variables");
  require(problem.num_objectives() == basis.vars() + 1, ErrorCode::kDimensionMismatch,
          "rule variables must equal k-1");
  if (!mode.sampled) return regions::monomial_moments(region, basis.exponents());
  const auto pts = regions::sample(region, mode.count, mode.seed);
  Vector w = Vector::Zero(basis.size());
  for (const auto& u : pts) w += basis.evaluate(u);
  return w / static_cast<double>(pts.size());
}

namespace {

void set_rule_objective(RuleModel& model, const molp::Molp& problem, const Vector& weights) {
  const Vector& ck = problem.objectives.back();
  LinExpr obj;
  for (int i = 0; i < model.num_outputs(); ++i) {
    if (ck(i) == 0.0) continue;
    for (int a = 0; a < model.basis().size(); ++a) {
      if (weights(a) != 0.0) obj += (ck(i) * weights(a)) * model.alpha(i, a);
    }
  }
  model.program().set_objective(obj);
}

void add_feasibility(RuleModel& model, const molp::Molp& problem, const regions::Region& region, RobustMethod method,
                     double epsilon) {
  const int v = model.vars();
  const rule::Exponent zero(v, 0);
  for (int i = 0; i + 1 < problem.num_objectives(); ++i) {
    // u_i - (c^i)'x(u) >= eps
    PolyExpr q = PolyExpr::coordinate(v, i, LinExpr(1.0)) - model.combination(problem.objectives[i]);
    if (epsilon != 0.0) q.add_term(zero, LinExpr(-epsilon));
    model.add_robust_nonneg(q, region, method, "obj" + std::to_string(i + 1));
  }
  for (int r = 0; r < problem.num_constraints(); ++r) {
    // b_r - a_r'x(u) >= eps
    PolyExpr q = PolyExpr::constant(v, LinExpr(problem.b(r) - epsilon)) -
                 model.combination(problem.A.row(r).transpose());
    model.add_robust_nonneg(q, region, method, "row" + std::to_string(r + 1));
  }
}

void check_problem(const molp::Molp& problem) {
  const auto v = molp::validate(problem);
  require(v.empty(), ErrorCode::kInvalidArgument, v.empty() ? "" : "invalid MOLP: " + v.front());
}

RuleModel make_rule_model(const molp::Molp& problem, const regions::Region& region, int degree) {
  const regions::Box bb = regions::bounding_box(region);
  const Vector center = 0.5 * (bb.lo + bb.hi);
  Vector scale = 0.5 * (bb.hi - bb.lo);
  for (Eigen::Index j = 0; j < scale.size(); ++j) {
    if (!(scale(j) > 0.0) || !std::isfinite(scale(j))) scale(j) = 1.0;
  }
  return RuleModel(problem.num_variables(), problem.num_objectives() - 1, degree, center, scale);
}

}  // namespace

RuleModel build_inner(const molp::Molp& problem, const regions::Region& region, const ReformulationPlan& plan) {
  check_problem(problem);
  const int k = problem.num_objectives();
  require(regions::dimension(region) == k - 1, ErrorCode::kDimensionMismatch, "region dimension must equal k-1");
  const RobustMethod method = robust_method(plan.inner_method);
  RuleModel model = make_rule_model(problem, region, plan.degree);
  add_feasibility(model, problem, region, method, plan.epsilon);
  if (plan.shape != Shape::kNone) add_shape_constraints(model, problem, region, plan.shape, method);
  set_rule_objective(model, problem, build_objective(problem, region, model.basis(), plan.objective));
  model.program().metadata["plan"] = to_json(plan);
  return model;
}

RuleModel build_inner_linear(const molp::Molp& problem, const regions::Region& region, const ObjectiveMode& mode) {
  ReformulationPlan p;
  p.degree = 1;
  p.objective = mode;
  if (regions::is_polyhedral(region)) {
    p.method = Method::kLinearPolyhedralLp;
  } else if (regions::is_ellipsoidal(region)) {
    p.method = Method::kLinearBallCqp;
  } else {
    fail(ErrorCode::kIncompatiblePlan, "linear reformulation needs a box, polyhedron, ball or ellipsoid");
  }
  p.inner_method = p.method;
  return build_inner(problem, region, p);
}

RuleModel build_inner_poly_interval(const molp::Molp& problem, const regions::Interval& interval, int degree,
                                    const ObjectiveMode& mode) {
  require(problem.num_objectives() == 2, ErrorCode::kIncompatiblePlan, "interval SDP reformulation needs k = 2");
  require(degree >= 1, ErrorCode::kIncompatiblePlan, "degree must be >= 1");
  ReformulationPlan p;
  p.method = p.inner_method = Method::kPolyIntervalSdp;
  p.degree = degree;
  p.objective = mode;
  return build_inner(problem, interval, p);
}

RuleModel build_inner_quad_ellipsoid(const molp::Molp& problem, const regions::Region& ellipsoid,
                                     const ObjectiveMode& mode) {
  require(problem.num_objectives() >= 3, ErrorCode::kIncompatiblePlan,
          "quadratic ellipsoid reformulation needs k >= 3; k = 2 uses the interval path");
  require(regions::is_ellipsoidal(ellipsoid), ErrorCode::kIncompatiblePlan, "region must be a ball or ellipsoid");
  ReformulationPlan p;
  p.method = p.inner_method = Method::kQuadEllipsoidSdp;
  p.degree = 2;
  p.objective = mode;
  return build_inner(problem, ellipsoid, p);
}

RuleModel build_inner_sos(const molp::Molp& problem, const regions::Region& region, int degree,
                          const ObjectiveMode& mode) {
  require(degree >= 1, ErrorCode::kIncompatiblePlan, "degree must be >= 1");
  ReformulationPlan p;
  p.method = p.inner_method = Method::kSosSemialgebraicSdp;
  p.degree = degree;
  p.exact = false;
  p.objective = mode;
  return build_inner(problem, region, p);
}

void add_shape_constraints(RuleModel& model, const molp::Molp& problem, const regions::Region& region, Shape shape,
                           RobustMethod method) {
  if (shape == Shape::kNone) return;
  const int k = problem.num_objectives();
  if (k == 2) {
    const PolyExpr phi = model.combination(problem.objectives.back());
    if (wants_monotone(shape)) {
      model.add_robust_nonneg(phi.derivative(0) * -1.0, region, method, "mono");
    }
    if (wants_convex(shape) && model.basis().degree() >= 2) {
      model.add_robust_nonneg(phi.derivative(0).derivative(0), region, method, "convex");
    }
    return;
  }
  require(model.basis().degree() <= 2, ErrorCode::kUnsupportedShape,
          "shape constraints for k > 2 need a rule of degree <= 2");
  // Gradient rows are affine in u, so the exact linear robust rule applies.
  RobustMethod linear = method;
  if (regions::is_polyhedral(region)) {
    linear = RobustMethod::kPolyhedralLp;
  } else if (regions::is_ellipsoidal(region)) {
    linear = RobustMethod::kEllipsoidSoc;
  }
  const int v = model.vars();
  for (int i = 0; i < model.num_outputs(); ++i) {
    const PolyExpr xi = model.x(i);
    if (wants_monotone(shape)) {
      for (int j = 0; j < v; ++j) {
        model.add_robust_nonneg(xi.derivative(j) * -1.0, region, linear,
                                "mono" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
      }
    }
    if (wants_convex(shape) && model.basis().degree() == 2) {
      // Gamma_i as a PSD block: G_jj = coef(u_j^2), G_jl = coef(u_j u_l) / 2
      auto& prog = model.program();
      const int G = model.add_psd_block("gamma" + std::to_string(i + 1), v);
      for (int l = 0; l < v; ++l) {
        for (int j = 0; j <= l; ++j) {
          rule::Exponent e(v, 0);
          e[j] += 1;
          e[l] += 1;
          const LinExpr c = xi.coefficient(e);
          prog.add_equality(prog.mat(G, j, l) - (j == l ? 1.0 : 0.5) * c);
        }
      }
    }
  }
}

RuleModel build_certificate_dominated(const molp::Molp& problem, const regions::Region& region,
                                      const rule::Polynomial& bound, int degree) {
  check_problem(problem);
  require(bound.vars() == problem.num_objectives() - 1, ErrorCode::kDimensionMismatch,
          "bound polynomial must depend on k-1 variables");
  ReformulationPlan p = plan_certificate(problem, region, degree, bound.degree());
  RuleModel model = make_rule_model(problem, region, degree);
  const RobustMethod method = robust_method(p.inner_method);
  add_feasibility(model, problem, region, method, 0.0);
  // t(u) - (c^k)'x(u) >= 0
  model.add_robust_nonneg(lift(bound) - model.combination(problem.objectives.back()), region, method, "bound");
  model.program().set_objective(LinExpr());
  model.program().metadata["plan"] = to_json(p);
  return model;
}

OuterModel build_outer_linear(const molp::Molp& problem, const regions::Region& box) {
  check_problem(problem);
  const int k = problem.num_objectives();
  const int n = problem.num_variables();
  const int m = problem.num_constraints();
  require(regions::dimension(box) == k - 1, ErrorCode::kDimensionMismatch, "region dimension must equal k-1");
  const regions::Box bx = regions::bounding_box(box);
  require(std::holds_alternative<regions::Interval>(box) || std::holds_alternative<regions::Box>(box),
          ErrorCode::kUnsupportedRegion, "outer approximation needs an interval or box region");

  // B x <= r stacks A x <= b and lo_i <= (c^i)'x <= hi_i.
  Matrix B(m + 2 * (k - 1), n);
  Vector r(m + 2 * (k - 1));
  B.topRows(m) = problem.A;
  r.head(m) = problem.b;
  for (int i = 0; i + 1 < k; ++i) {
    B.row(m + 2 * i) = -problem.objectives[i].transpose();
    r(m + 2 * i) = -bx.lo(i);
    B.row(m + 2 * i + 1) = problem.objectives[i].transpose();
    r(m + 2 * i + 1) = bx.hi(i);
  }

  OuterModel out;
  auto& prog = out.program;
  out.beta0 = prog.add_block("beta0", Cone::kFree, 1);
  out.beta = prog.add_block("beta", Cone::kFree, k - 1);
  const int w = prog.add_block("w", Cone::kNonNeg, static_cast<int>(B.rows()));
  // min over the polyhedron of (c^k - sum beta_i c^i)'x >= beta0:
  // B'w = sum beta_i c^i - c^k, r'w <= -beta0, w >= 0
  for (int j = 0; j < n; ++j) {
    LinExpr e(problem.objectives.back()(j));
    for (int i = 0; i + 1 < k; ++i) {
      if (problem.objectives[i](j) != 0.0) e -= problem.objectives[i](j) * prog.var(out.beta, i);
    }
    for (Eigen::Index row = 0; row < B.rows(); ++row) {
      if (B(row, j) != 0.0) e += B(row, j) * prog.var(w, static_cast<int>(row));
    }
    prog.add_equality(e);
  }
  LinExpr rw = prog.var(out.beta0);
  for (Eigen::Index row = 0; row < r.size(); ++row) {
    if (r(row) != 0.0) rw += r(row) * prog.var(w, static_cast<int>(row));
  }
  prog.add_less_equal(rw);

  // maximize the integral of l over the box
  const rule::MonomialBasis lin(k - 1, 1);
  const Vector mom = regions::monomial_moments(box, lin.exponents());
  LinExpr obj = -mom(0) * prog.var(out.beta0);
  for (int i = 0; i + 1 < k; ++i) obj -= mom(i + 1) * prog.var(out.beta, i);
  prog.set_objective(obj);
  ReformulationPlan p;
  p.method = p.inner_method = Method::kOuterLinearLp;
  prog.metadata["plan"] = to_json(p);
  prog.metadata["objective_sign"] = -1;
  return out;
}

RecoveredRule recover_rule(const RuleModel& model, const conic::ConicSolution& solution) {
  require(conic::solved(solution.status), ErrorCode::kBadStatus,
          "cannot recover a rule from a " + conic::to_string(solution.status) + " solution");
  const auto& prog = model.program();
  RecoveredRule out{rule::PolynomialRule(model.basis(), model.coefficients(solution.primal)), {}};
  for (const auto& [name, block] : model.psd_blocks()) out.psd[name] = solution.matrix(prog, block);
  return out;
}

AffineFunction recover_outer(const OuterModel& model, const conic::ConicSolution& solution) {
  require(conic::solved(solution.status), ErrorCode::kBadStatus,
          "cannot recover l from a " + conic::to_string(solution.status) + " solution");
  AffineFunction f;
  f.beta0 = solution.primal(model.program.index(model.beta0, 0));
  const int v = model.program.block(model.beta).size;
  f.beta.resize(v);
  for (int i = 0; i < v; ++i) f.beta(i) = solution.primal(model.program.index(model.beta, i));
  return f;
}

}  // namespace paretoaro::robust
