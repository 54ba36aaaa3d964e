#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "paretoaro/molp/molp.hpp"
#include "paretoaro/regions/region.hpp"
#include "paretoaro/robust/builders.hpp"
#include "paretoaro/robust/plan.hpp"
#include "paretoaro/rule/decision_rule.hpp"

namespace paretoaro::api {

inline constexpr int kSchemaVersion = 1;

enum class Task { kInner, kOuter, kCertificate };
std::string to_string(Task t);
Task task_from_string(const std::string& s);

struct ApproximationRequest {
  Task task = Task::kInner;
  molp::Molp problem;
  regions::Region region;
  int degree = 1;
  robust::Shape shape = robust::Shape::kNone;
  robust::ObjectiveMode objective;
  // Inner tasks: forces a reformulation instead of the most exact one.
  std::optional<robust::Method> method;
  std::uint64_t seed = 1;
  // Certificate tasks: the graph {(u, t(u))} to certify as dominated.
  std::optional<rule::Polynomial> bound;
  double epsilon = 0.0;
  // Samples of the soundness and tightness checks.
  int check_samples = 1000;
};

struct SolverReport {
  std::string status;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
};

struct SoundnessReport {
  int samples = 0;
  // Largest violation of A x(u) <= b and (c^i)'x(u) <= u_i over the samples.
  double max_violation = 0.0;
  bool passed = false;
};

// max over samples of u_i - (c^i)'x(u); above the threshold the parametric
// image strictly dominates the inner surface.
struct TightnessReport {
  double max_gap = 0.0;
  bool ips_dominated = false;
};

struct CornerCheck {
  Vector u;
  std::string status;
  std::optional<double> value;
};

struct InfeasibilityDiagnosis {
  std::vector<std::string> hypotheses;
  // Single-point scalarizations, a heuristic hint only.
  std::vector<CornerCheck> corners;
  std::string hint;
};

struct OuterReport {
  Vector tangency;
  double min_gap = 0.0;        // min over the grid of oracle - l
  double max_violation = 0.0;  // max over the grid of l - oracle
  int grid_points = 0;
  int infeasible_points = 0;
  bool meaningless = false;
  std::vector<std::string> notes;
};

struct ApproximationResult {
  ApproximationRequest request;
  // optimal | near_optimal | infeasible | unsound | certified | no_certificate
  std::string status;
  robust::ReformulationPlan plan;
  std::optional<rule::PolynomialRule> rule;
  std::optional<robust::AffineFunction> outer;
  std::optional<double> objective;
  SolverReport solver;
  std::optional<SoundnessReport> soundness;
  std::optional<TightnessReport> tightness;
  std::optional<InfeasibilityDiagnosis> diagnosis;
  std::optional<OuterReport> outer_report;
  // PSD block orders, and the smallest eigenvalue of each recovered block.
  std::vector<int> psd_orders;
  std::map<std::string, double> psd_min_eigenvalue;
  std::map<std::string, double> timings;

  bool success() const;
};

nlohmann::json to_json(const ApproximationRequest& r);
// A "molp" given as {"ref": path} is loaded relative to base_dir; references
// are rejected when base_dir is empty.
ApproximationRequest request_from_json(const nlohmann::json& j, const std::string& base_dir = "");

nlohmann::json to_json(const ApproximationResult& r);
ApproximationResult result_from_json(const nlohmann::json& j);

nlohmann::json to_json(const robust::AffineFunction& f);
robust::AffineFunction affine_from_json(const nlohmann::json& j);

}  // namespace paretoaro::api
