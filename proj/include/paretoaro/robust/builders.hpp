#pragma once

#include <map>
#include <string>

#include "paretoaro/conic/solver.hpp"
#include "paretoaro/molp/molp.hpp"
#include "paretoaro/regions/region.hpp"
#include "paretoaro/robust/model.hpp"
#include "paretoaro/robust/plan.hpp"
#include "paretoaro/rule/decision_rule.hpp"

namespace paretoaro::robust {

// Weight w_a of each basis monomial in the averaged objective: the integral
// of u^a over the region (closed form) or its sample mean. The objective is
// sum_{i,a} c^k_i w_a alpha_{i,a}.
Vector build_objective(const molp::Molp& problem, const regions::Region& region, const rule::MonomialBasis& basis,
                       const ObjectiveMode& mode);

// Robust feasibility of x(u): (c^i)'x(u) <= u_i + ... and A x(u) <= b on U,
// with the robust rule picked from plan.inner_method. plan.epsilon tightens
// every constraint by that margin.
RuleModel build_inner(const molp::Molp& problem, const regions::Region& region, const ReformulationPlan& plan);

RuleModel build_inner_linear(const molp::Molp& problem, const regions::Region& region, const ObjectiveMode& mode);
RuleModel build_inner_poly_interval(const molp::Molp& problem, const regions::Interval& interval, int degree,
                                    const ObjectiveMode& mode);
RuleModel build_inner_quad_ellipsoid(const molp::Molp& problem, const regions::Region& ellipsoid,
                                     const ObjectiveMode& mode);
RuleModel build_inner_sos(const molp::Molp& problem, const regions::Region& region, int degree,
                          const ObjectiveMode& mode);

// k = 2: -(c^2)'x'(u) >= 0 and/or (c^2)'x''(u) >= 0 on U.
// k > 2 (degree <= 2): -dx_i/du_j >= 0 on U and/or Gamma_i PSD.
void add_shape_constraints(RuleModel& model, const molp::Molp& problem, const regions::Region& region, Shape shape,
                           RobustMethod method);

// Feasibility program: inner constraints plus (c^k)'x(u) <= t(u) on U.
RuleModel build_certificate_dominated(const molp::Molp& problem, const regions::Region& region,
                                      const rule::Polynomial& bound, int degree);

// l(u) = beta0 + beta'u with l((c^1)'x, ...) <= (c^k)'x on
// {A x <= b, lo_i <= (c^i)'x <= hi_i}; maximizes the integral of l over U.
struct OuterModel {
  conic::ConicProgram program;
  int beta0 = -1;  // block ids
  int beta = -1;
};
OuterModel build_outer_linear(const molp::Molp& problem, const regions::Region& box);

struct AffineFunction {
  double beta0 = 0.0;
  Vector beta;
  double operator()(const Vector& u) const { return beta0 + beta.dot(u); }
};

struct RecoveredRule {
  rule::PolynomialRule rule;
  std::map<std::string, Matrix> psd;
};

// Throws Error(kBadStatus) unless the solution is optimal.
RecoveredRule recover_rule(const RuleModel& model, const conic::ConicSolution& solution);
AffineFunction recover_outer(const OuterModel& model, const conic::ConicSolution& solution);

}  // namespace paretoaro::robust
