#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "paretoaro/common/types.hpp"

namespace paretoaro::molp {

// min (c^1'x, ..., c^k'x)  s.t.  A x <= b.
struct Molp {
  Matrix A;
  Vector b;
  std::vector<Vector> objectives;
  std::vector<std::string> names;

  int num_objectives() const { return static_cast<int>(objectives.size()); }
  int num_constraints() const { return static_cast<int>(A.rows()); }
  int num_variables() const { return static_cast<int>(A.cols()); }
  // Rows c^i' stacked (k x n).
  Matrix objective_matrix() const;
};

// Empty iff the problem is well formed; each entry names the field.
std::vector<std::string> validate(const Molp& problem);

Molp from_json(const nlohmann::json& j);
nlohmann::json to_json(const Molp& problem);

using ObjectivePoint = Vector;

enum class ScalarizationStatus { kOptimal, kInfeasible, kUnbounded };
std::string to_string(ScalarizationStatus status);

struct ScalarizationResult {
  ScalarizationStatus status = ScalarizationStatus::kInfeasible;
  std::optional<Vector> x;
  std::optional<ObjectivePoint> f;
};

inline constexpr double kFeasTol = 1e-7;

// min c^k'x  s.t.  c^i'x <= u_i (i < k),  A x <= b.
// Throws Error(kSolverFailure) when the LP solve does not converge.
ScalarizationResult scalarize_epsilon_constraint(const Molp& problem, const Vector& u);

struct FrontPoint {
  Vector u;
  bool feasible = false;
  double value = 0.0;  // optimal c^k'x when feasible
};

std::vector<FrontPoint> pareto_front_oracle(const Molp& problem, const std::vector<Vector>& grid);

enum class Dominance { kStrong, kWeak, kNone };
std::string to_string(Dominance d);

// kStrong: f1 < f2 componentwise; kWeak: f1 <= f2 and f1 != f2.
Dominance dominates(const ObjectivePoint& f1, const ObjectivePoint& f2);

// Range [min, max] of c^i'x over the feasible set; nullopt when unbounded.
std::optional<std::pair<double, double>> objective_range(const Molp& problem, int objective);

}  // namespace paretoaro::molp
