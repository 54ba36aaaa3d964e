#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "paretoaro/molp/molp.hpp"
#include "paretoaro/regions/region.hpp"

namespace paretoaro::robust {

enum class Method {
  kLinearPolyhedralLp,
  kLinearBallCqp,
  kPolyIntervalSdp,
  kQuadEllipsoidSdp,
  kSosSemialgebraicSdp,
  kOuterLinearLp,
  kCertificateFeasibility,
};

enum class Shape { kNone, kNonincreasing, kConvex, kBoth };

std::string to_string(Method m);
std::string to_string(Shape s);
Method method_from_string(const std::string& s);
Shape shape_from_string(const std::string& s);  // also accepts "mono"

inline bool wants_monotone(Shape s) { return s == Shape::kNonincreasing || s == Shape::kBoth; }
inline bool wants_convex(Shape s) { return s == Shape::kConvex || s == Shape::kBoth; }

struct ObjectiveMode {
  bool sampled = false;
  int count = 1000;
  std::uint64_t seed = 1;

  static ObjectiveMode closed() { return {}; }
  static ObjectiveMode sampling(int count, std::uint64_t seed) { return {true, count, seed}; }
};

std::string to_string(const ObjectiveMode& m);
// "closed" or "sampled:N:SEED".
ObjectiveMode objective_mode_from_string(const std::string& s);

// How each robust constraint q(u) >= 0 on U is turned into conic form.
enum class RobustMethod { kPolyhedralLp, kEllipsoidSoc, kMomentInterval, kSLemma, kSos };

struct ReformulationPlan {
  Method method = Method::kLinearPolyhedralLp;
  // Method used for the robust constraints (differs from `method` only for
  // certificates, which reuse the inner machinery).
  Method inner_method = Method::kLinearPolyhedralLp;
  int degree = 1;
  bool exact = true;
  // Degrees of sigma_0 and of the multiplier of each region polynomial.
  std::vector<int> sos_degrees;
  Shape shape = Shape::kNone;
  ObjectiveMode objective;
  double epsilon = 0.0;
};

nlohmann::json to_json(const ReformulationPlan& p);
ReformulationPlan plan_from_json(const nlohmann::json& j);

// Picks the most exact applicable inner reformulation, or checks that the
// requested `method` applies (Error(kIncompatiblePlan) otherwise). Throws
// Error(kUnsupported / kUnsupportedShape / kUnsupportedRegion) when the
// combination cannot be handled.
ReformulationPlan plan(const molp::Molp& problem, const regions::Region& region, int degree, Shape shape,
                       const ObjectiveMode& objective, std::optional<Method> method = std::nullopt);

// Outer approximations are affine only.
ReformulationPlan plan_outer(const molp::Molp& problem, const regions::Region& region, int degree);

// Certificates reuse the inner plan; `bound_degree` is the degree of t(u).
ReformulationPlan plan_certificate(const molp::Molp& problem, const regions::Region& region, int degree,
                                   int bound_degree);

RobustMethod robust_method(Method m);

// Target degree of sigma_0 for a constraint of degree `q_degree`, and the
// multiplier degree for a region polynomial of degree `p_degree`; both even.
int sigma0_degree(int q_degree, const std::vector<int>& region_degrees);
int multiplier_degree(int sigma0, int p_degree);

}  // namespace paretoaro::robust
