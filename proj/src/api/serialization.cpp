#include <filesystem>
#include <fstream>

#include "paretoaro/api/types.hpp"
#include "paretoaro/common/error.hpp"

namespace paretoaro::api {

namespace {

nlohmann::json vec_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector json_vec(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void check_version(const nlohmann::json& j, const char* what) {
  if (!j.is_object()) fail(ErrorCode::kParseError, std::string(what) + " must be a JSON object");
  const int v = j.value("v", kSchemaVersion);
  if (v != kSchemaVersion) fail(ErrorCode::kParseError, std::string(what) + ": unsupported schema version " + std::to_string(v));
}

molp::Molp load_problem(const nlohmann::json& j, const std::string& base_dir) {
  if (j.is_object() && j.contains("ref")) {
    if (base_dir.empty()) fail(ErrorCode::kParseError, "problem references are not allowed here");
    const auto path = std::filesystem::path(base_dir) / j.at("ref").get<std::string>();
    std::ifstream in(path);
    if (!in) fail(ErrorCode::kNotFound, "cannot open problem file " + path.string());
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kParseError, path.string() + ": " + e.what());
    }
    return molp::from_json(doc);
  }
  return molp::from_json(j);
}

}  // namespace

std::string to_string(Task t) {
  switch (t) {
    case Task::kInner: return "inner";
    case Task::kOuter: return "outer";
    case Task::kCertificate: return "certificate";
  }
  return "?";
}

Task task_from_string(const std::string& s) {
  if (s == "inner") return Task::kInner;
  if (s == "outer") return Task::kOuter;
  if (s == "certificate" || s == "certify") return Task::kCertificate;
  fail(ErrorCode::kParseError, "unknown task '" + s + "'");
}

bool ApproximationResult::success() const {
  return status == "optimal" || status == "near_optimal" || status == "certified";
}

nlohmann::json to_json(const robust::AffineFunction& f) { return {{"beta0", f.beta0}, {"beta", vec_json(f.beta)}}; }

robust::AffineFunction affine_from_json(const nlohmann::json& j) {
  robust::AffineFunction f;
  f.beta0 = j.at("beta0").get<double>();
  f.beta = json_vec(j.at("beta"));
  return f;
}

nlohmann::json to_json(const ApproximationRequest& r) {
  nlohmann::json j{{"v", kSchemaVersion},
                   {"task", to_string(r.task)},
                   {"molp", molp::to_json(r.problem)},
                   {"region", regions::to_json(r.region)},
                   {"degree", r.degree},
                   {"shape", robust::to_string(r.shape)},
                   {"objective", robust::to_string(r.objective)},
                   {"seed", r.seed},
                   {"epsilon", r.epsilon},
                   {"check_samples", r.check_samples}};
  if (r.method) j["method"] = robust::to_string(*r.method);
  if (r.bound) j["bound"] = regions::polynomial_to_json(*r.bound);
  return j;
}

ApproximationRequest request_from_json(const nlohmann::json& j, const std::string& base_dir) {
  check_version(j, "request");
  try {
    ApproximationRequest r;
    r.task = task_from_string(j.value("task", std::string("inner")));
    if (!j.contains("molp")) fail(ErrorCode::kParseError, "request is missing 'molp'");
    if (!j.contains("region")) fail(ErrorCode::kParseError, "request is missing 'region'");
    r.problem = load_problem(j.at("molp"), base_dir);
    r.region = regions::region_from_json(j.at("region"));
    r.degree = j.value("degree", 1);
    r.shape = robust::shape_from_string(j.value("shape", std::string("none")));
    r.objective = robust::objective_mode_from_string(j.value("objective", std::string("closed")));
    if (j.contains("method")) r.method = robust::method_from_string(j.at("method").get<std::string>());
    r.seed = j.value("seed", std::uint64_t{1});
    r.epsilon = j.value("epsilon", 0.0);
    r.check_samples = j.value("check_samples", 1000);
    if (j.contains("bound")) r.bound = regions::polynomial_from_json(regions::dimension(r.region), j.at("bound"));
    if (r.task == Task::kCertificate && !r.bound) fail(ErrorCode::kParseError, "certificate request needs 'bound'");
    if (r.check_samples < 1) fail(ErrorCode::kParseError, "check_samples must be positive");
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParseError, std::string("request: ") + e.what());
  }
}

nlohmann::json to_json(const ApproximationResult& r) {
  nlohmann::json j{{"v", kSchemaVersion},
                   {"request", to_json(r.request)},
                   {"status", r.status},
                   {"plan", robust::to_json(r.plan)},
                   {"solver",
                    {{"status", r.solver.status},
                     {"iterations", r.solver.iterations},
                     {"primal_residual", r.solver.primal_residual},
                     {"dual_residual", r.solver.dual_residual},
                     {"gap", r.solver.gap}}},
                   {"psd_orders", r.psd_orders},
                   {"psd_min_eigenvalue", r.psd_min_eigenvalue},
                   {"timings", r.timings}};
  if (r.rule) j["rule"] = rule::to_json(*r.rule);
  if (r.outer) j["outer"] = to_json(*r.outer);
  if (r.objective) j["objective"] = *r.objective;
  nlohmann::json diag = nlohmann::json::object();
  if (r.soundness) {
    diag["soundness"] = {{"samples", r.soundness->samples},
                         {"max_violation", r.soundness->max_violation},
                         {"passed", r.soundness->passed}};
  }
  if (r.tightness) {
    diag["tightness"] = {{"max_gap", r.tightness->max_gap}, {"ips_dominated", r.tightness->ips_dominated}};
  }
  if (r.diagnosis) {
    nlohmann::json corners = nlohmann::json::array();
    for (const auto& c : r.diagnosis->corners) {
      nlohmann::json cj{{"u", vec_json(c.u)}, {"status", c.status}};
      if (c.value) cj["value"] = *c.value;
      corners.push_back(cj);
    }
    diag["infeasibility"] = {{"hypotheses", r.diagnosis->hypotheses},
                             {"corner_scalarizations", corners},
                             {"heuristic_hint", r.diagnosis->hint}};
  }
  if (r.outer_report) {
    const auto& o = *r.outer_report;
    diag["outer"] = {{"tangency", vec_json(o.tangency)},
                     {"min_gap", o.min_gap},
                     {"max_violation", o.max_violation},
                     {"grid_points", o.grid_points},
                     {"infeasible_points", o.infeasible_points},
                     {"meaningless", o.meaningless},
                     {"notes", o.notes}};
  }
  j["diagnostics"] = diag;
  return j;
}

ApproximationResult result_from_json(const nlohmann::json& j) {
  check_version(j, "result");
  try {
    ApproximationResult r;
    r.request = request_from_json(j.at("request"));
    r.status = j.at("status").get<std::string>();
    r.plan = robust::plan_from_json(j.at("plan"));
    const auto& s = j.at("solver");
    r.solver = {s.at("status").get<std::string>(), s.at("iterations").get<int>(), s.at("primal_residual").get<double>(),
                s.at("dual_residual").get<double>(), s.at("gap").get<double>()};
    r.psd_orders = j.value("psd_orders", std::vector<int>{});
    r.psd_min_eigenvalue = j.value("psd_min_eigenvalue", std::map<std::string, double>{});
    r.timings = j.value("timings", std::map<std::string, double>{});
    if (j.contains("rule")) r.rule = rule::rule_from_json(j.at("rule"));
    if (j.contains("outer")) r.outer = affine_from_json(j.at("outer"));
    if (j.contains("objective")) r.objective = j.at("objective").get<double>();
    const nlohmann::json diag = j.value("diagnostics", nlohmann::json::object());
    if (diag.contains("soundness")) {
      const auto& d = diag.at("soundness");
      r.soundness = SoundnessReport{d.at("samples").get<int>(), d.at("max_violation").get<double>(),
                                    d.at("passed").get<bool>()};
    }
    if (diag.contains("tightness")) {
      const auto& d = diag.at("tightness");
      r.tightness = TightnessReport{d.at("max_gap").get<double>(), d.at("ips_dominated").get<bool>()};
    }
    if (diag.contains("infeasibility")) {
      const auto& d = diag.at("infeasibility");
      InfeasibilityDiagnosis dg;
      dg.hypotheses = d.at("hypotheses").get<std::vector<std::string>>();
      dg.hint = d.value("heuristic_hint", std::string());
      for (const auto& c : d.at("corner_scalarizations")) {
        CornerCheck cc{json_vec(c.at("u")), c.at("status").get<std::string>(), std::nullopt};
        if (c.contains("value")) cc.value = c.at("value").get<double>();
        dg.corners.push_back(std::move(cc));
      }
      r.diagnosis = std::move(dg);
    }
    if (diag.contains("outer")) {
      const auto& d = diag.at("outer");
      OuterReport o;
      o.tangency = json_vec(d.at("tangency"));
      o.min_gap = d.at("min_gap").get<double>();
      o.max_violation = d.at("max_violation").get<double>();
      o.grid_points = d.at("grid_points").get<int>();
      o.infeasible_points = d.at("infeasible_points").get<int>();
      o.meaningless = d.at("meaningless").get<bool>();
      o.notes = d.value("notes", std::vector<std::string>{});
      r.outer_report = std::move(o);
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParseError, std::string("result: ") + e.what());
  }
}

}  // namespace paretoaro::api
