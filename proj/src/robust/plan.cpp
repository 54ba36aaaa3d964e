#include "paretoaro/robust/plan.hpp"

#include <algorithm>

#include "paretoaro/common/error.hpp"

namespace paretoaro::robust {

namespace {

int round_up_even(int d) { return d % 2 == 0 ? d : d + 1; }

std::vector<int> region_degrees(const regions::Region& region) {
  std::vector<int> out;
  for (const auto& p : regions::to_semialgebraic(region).polys) out.push_back(p.degree());
  return out;
}

bool has_quadratic_bound(const regions::Region& region) {
  return regions::is_ellipsoidal(region);
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::kLinearPolyhedralLp: return "linear-polyhedral-LP";
    case Method::kLinearBallCqp: return "linear-ball-CQP";
    case Method::kPolyIntervalSdp: return "poly-interval-SDP";
    case Method::kQuadEllipsoidSdp: return "quad-ellipsoid-SDP";
    case Method::kSosSemialgebraicSdp: return "sos-semialgebraic-SDP";
    case Method::kOuterLinearLp: return "outer-linear-LP";
    case Method::kCertificateFeasibility: return "certificate-feasibility";
  }
  return "?";
}

Method method_from_string(const std::string& s) {
  for (Method m : {Method::kLinearPolyhedralLp, Method::kLinearBallCqp, Method::kPolyIntervalSdp,
                   Method::kQuadEllipsoidSdp, Method::kSosSemialgebraicSdp, Method::kOuterLinearLp,
                   Method::kCertificateFeasibility}) {
    if (to_string(m) == s) return m;
  }
  fail(ErrorCode::kParseError, "unknown method '" + s + "'");
}

std::string to_string(Shape s) {
  switch (s) {
    case Shape::kNone: return "none";
    case Shape::kNonincreasing: return "nonincreasing";
    case Shape::kConvex: return "convex";
    case Shape::kBoth: return "both";
  }
  return "?";
}

Shape shape_from_string(const std::string& s) {
  if (s == "none") return Shape::kNone;
  if (s == "mono" || s == "nonincreasing") return Shape::kNonincreasing;
  if (s == "convex") return Shape::kConvex;
  if (s == "both") return Shape::kBoth;
  fail(ErrorCode::kParseError, "unknown shape '" + s + "'");
}

std::string to_string(const ObjectiveMode& m) {
  if (!m.sampled) return "closed";
  return "sampled:" + std::to_string(m.count) + ":" + std::to_string(m.seed);
}

ObjectiveMode objective_mode_from_string(const std::string& s) {
  if (s == "closed") return ObjectiveMode::closed();
  const std::string prefix = "sampled:";
  if (s.rfind(prefix, 0) == 0) {
    const auto rest = s.substr(prefix.size());
    const auto colon = rest.find(':');
    try {
      const int count = std::stoi(rest.substr(0, colon));
      const std::uint64_t seed = colon == std::string::npos ? 1 : std::stoull(rest.substr(colon + 1));
      require(count >= 1, ErrorCode::kParseError, "sample count must be >= 1");
      return ObjectiveMode::sampling(count, seed);
    } catch (const std::logic_error&) {
      fail(ErrorCode::kParseError, "bad objective mode '" + s + "'");
    }
  }
  fail(ErrorCode::kParseError, "objective mode must be 'closed' or 'sampled:N:SEED'");
}

nlohmann::json to_json(const ReformulationPlan& p) {
  nlohmann::json j{{"method", to_string(p.method)},
                   {"inner_method", to_string(p.inner_method)},
                   {"degree", p.degree},
                   {"exact", p.exact},
                   {"shape", to_string(p.shape)},
                   {"objective_mode", to_string(p.objective)},
                   {"epsilon", p.epsilon}};
  if (!p.sos_degrees.empty()) j["sos_degrees"] = p.sos_degrees;
  return j;
}

ReformulationPlan plan_from_json(const nlohmann::json& j) {
  try {
    ReformulationPlan p;
    p.method = method_from_string(j.at("method").get<std::string>());
    p.inner_method = method_from_string(j.value("inner_method", to_string(p.method)));
    p.degree = j.at("degree").get<int>();
    p.exact = j.value("exact", true);
    p.shape = shape_from_string(j.value("shape", std::string("none")));
    p.objective = objective_mode_from_string(j.value("objective_mode", std::string("closed")));
    p.epsilon = j.value("epsilon", 0.0);
    if (j.contains("sos_degrees")) p.sos_degrees = j.at("sos_degrees").get<std::vector<int>>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParseError, std::string("plan: ") + e.what());
  }
}

int sigma0_degree(int q_degree, const std::vector<int>& region_degrees) {
  int d = q_degree;
  for (int p : region_degrees) d = std::max(d, p);
  return round_up_even(d);
}

int multiplier_degree(int sigma0, int p_degree) { return round_up_even(std::max(0, sigma0 - p_degree)); }

RobustMethod robust_method(Method m) {
  switch (m) {
    case Method::kLinearPolyhedralLp: return RobustMethod::kPolyhedralLp;
    case Method::kLinearBallCqp: return RobustMethod::kEllipsoidSoc;
    case Method::kPolyIntervalSdp: return RobustMethod::kMomentInterval;
    case Method::kQuadEllipsoidSdp: return RobustMethod::kSLemma;
    case Method::kSosSemialgebraicSdp: return RobustMethod::kSos;
    default: break;
  }
  fail(ErrorCode::kIncompatiblePlan, "method " + to_string(m) + " has no robust-constraint rule");
}

ReformulationPlan plan(const molp::Molp& problem, const regions::Region& region, int degree, Shape shape,
                       const ObjectiveMode& objective, std::optional<Method> method) {
  const int k = problem.num_objectives();
  require(degree >= 1, ErrorCode::kInvalidArgument, "degree must be >= 1");
  require(regions::dimension(region) == k - 1, ErrorCode::kDimensionMismatch,
          "region dimension must equal k-1 = " + std::to_string(k - 1));
  regions::validate(region);
  if (k > 2 && shape != Shape::kNone) {
    require(degree <= 2, ErrorCode::kUnsupportedShape, "shape constraints for k > 2 need a rule of degree <= 2");
  }
  if (!objective.sampled) {
    require(std::holds_alternative<regions::Interval>(region) || std::holds_alternative<regions::Box>(region),
            ErrorCode::kUnsupportedRegion,
            "closed-form objective needs an interval or box region; use sampled:N:SEED");
  }

  const bool interval = std::holds_alternative<regions::Interval>(region);
  auto applicable = [&](Method m) {
    switch (m) {
      case Method::kLinearPolyhedralLp: return degree == 1 && regions::is_polyhedral(region);
      case Method::kLinearBallCqp: return degree == 1 && regions::is_ellipsoidal(region);
      case Method::kPolyIntervalSdp: return k == 2 && interval;
      case Method::kQuadEllipsoidSdp: return k > 2 && degree == 2 && regions::is_ellipsoidal(region);
      case Method::kSosSemialgebraicSdp: return true;
      case Method::kOuterLinearLp:
      case Method::kCertificateFeasibility: return false;
    }
    return false;
  };
  ReformulationPlan p;
  p.degree = degree;
  p.shape = shape;
  p.objective = objective;
  if (method) {
    require(applicable(*method), ErrorCode::kIncompatiblePlan,
            to_string(*method) + " does not apply to this region, degree and k");
    p.method = *method;
  } else {
    // Most exact applicable method first.
    p.method = Method::kSosSemialgebraicSdp;
    for (Method m : {Method::kLinearPolyhedralLp, Method::kLinearBallCqp, Method::kPolyIntervalSdp,
                     Method::kQuadEllipsoidSdp}) {
      if (applicable(m)) {
        p.method = m;
        break;
      }
    }
  }
  p.exact = p.method != Method::kSosSemialgebraicSdp;
  if (!p.exact) {
    auto degs = region_degrees(region);
    if (!has_quadratic_bound(region)) degs.push_back(2);  // compactness ball
    const int s0 = sigma0_degree(degree, degs);
    p.sos_degrees.push_back(s0);
    for (int d : degs) p.sos_degrees.push_back(multiplier_degree(s0, d));
  }
  p.inner_method = p.method;
  return p;
}

ReformulationPlan plan_outer(const molp::Molp& problem, const regions::Region& region, int degree) {
  require(degree == 1, ErrorCode::kUnsupported, "outer approximations are affine only (degree 1)");
  require(regions::dimension(region) == problem.num_objectives() - 1, ErrorCode::kDimensionMismatch,
          "region dimension must equal k-1");
  require(std::holds_alternative<regions::Interval>(region) || std::holds_alternative<regions::Box>(region),
          ErrorCode::kUnsupportedRegion, "outer approximation needs an interval or box region");
  regions::validate(region);
  ReformulationPlan p;
  p.method = Method::kOuterLinearLp;
  p.inner_method = Method::kOuterLinearLp;
  p.degree = 1;
  return p;
}

ReformulationPlan plan_certificate(const molp::Molp& problem, const regions::Region& region, int degree,
                                   int bound_degree) {
  const bool sampled = !(std::holds_alternative<regions::Interval>(region) || std::holds_alternative<regions::Box>(region));
  ReformulationPlan p = plan(problem, region, std::max(degree, bound_degree), Shape::kNone,
                             sampled ? ObjectiveMode::sampling(1, 1) : ObjectiveMode::closed());
  p.degree = degree;
  p.method = Method::kCertificateFeasibility;
  return p;
}

}  // namespace paretoaro::robust
