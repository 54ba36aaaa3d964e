#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "paretoaro/api/grid.hpp"
#include "paretoaro/api/pipeline.hpp"
#include "paretoaro/api/service.hpp"
#include "paretoaro/common/error.hpp"
#include "paretoaro/conic/sdpa.hpp"

namespace {

using namespace paretoaro;

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kNotFound, "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParseError, path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kInvalidArgument, "cannot write " + path);
  out << text << "\n";
}

struct JobArgs {
  std::string problem, region, bound, export_sdpa, out, objective = "closed", shape = "none", method;
  int degree = 1;
  int samples = 1000;
  std::uint64_t seed = 1;
  double epsilon = 0.0;
  double tol = 1e-8;
};

void add_job_options(CLI::App* cmd, JobArgs& a, bool certificate) {
  cmd->add_option("--problem", a.problem, "MOLP JSON file")->required();
  cmd->add_option("--region", a.region, "region JSON file")->required();
  cmd->add_option("--degree,-d", a.degree, "rule degree")->capture_default_str();
  cmd->add_option("--shape", a.shape, "none|mono|convex|both")->capture_default_str();
  cmd->add_option("--objective", a.objective, "closed|sampled:N:SEED")->capture_default_str();
  cmd->add_option("--method", a.method, "force a reformulation (inner only), e.g. sos-semialgebraic-SDP");
  cmd->add_option("--seed", a.seed, "seed of the soundness samples")->capture_default_str();
  cmd->add_option("--samples", a.samples, "soundness samples")->capture_default_str();
  cmd->add_option("--epsilon", a.epsilon, "constraint tightening margin")->capture_default_str();
  cmd->add_option("--tol", a.tol, "solver tolerance")->capture_default_str();
  cmd->add_option("--export-sdpa", a.export_sdpa, "write the conic program in SDPA sparse format");
  cmd->add_option("--out,-o", a.out, "result JSON file (stdout when omitted)");
  if (certificate) cmd->add_option("--bound", a.bound, "bound polynomial JSON file")->required();
}

int run_job(api::Task task, const JobArgs& a) {
  api::ApproximationRequest req;
  req.task = task;
  req.problem = molp::from_json(read_json(a.problem));
  req.region = regions::region_from_json(read_json(a.region));
  req.degree = a.degree;
  req.shape = robust::shape_from_string(a.shape);
  req.objective = robust::objective_mode_from_string(a.objective);
  if (!a.method.empty()) req.method = robust::method_from_string(a.method);
  req.seed = a.seed;
  req.check_samples = a.samples;
  req.epsilon = a.epsilon;
  if (!a.bound.empty()) req.bound = regions::polynomial_from_json(regions::dimension(req.region), read_json(a.bound));
  if (!a.export_sdpa.empty()) {
    std::ofstream out(a.export_sdpa);
    if (!out) fail(ErrorCode::kInvalidArgument, "cannot write " + a.export_sdpa);
    out << conic::export_sdpa(api::build_program(req));
  }
  api::PipelineOptions opts;
  opts.solver.tol = a.tol;
  const api::ApproximationResult res = api::run(req, opts);
  write_text(a.out, api::to_json(res).dump(2));
  std::cerr << "status: " << res.status;
  if (res.objective) std::cerr << "  objective: " << *res.objective;
  std::cerr << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pareto-set approximation of multiobjective linear programs"};
  app.require_subcommand(1);

  JobArgs inner_args, outer_args, cert_args;
  auto* inner = app.add_subcommand("inner", "polynomial inner approximation");
  add_job_options(inner, inner_args, false);
  auto* outer = app.add_subcommand("outer", "affine outer approximation");
  add_job_options(outer, outer_args, false);
  auto* certify = app.add_subcommand("certify", "certify that the graph of a bound is dominated");
  add_job_options(certify, cert_args, true);

  std::string eval_result, eval_grid, eval_out;
  bool eval_oracle = false;
  auto* eval = app.add_subcommand("eval", "evaluate a result's surface on a grid");
  eval->add_option("--result", eval_result, "result JSON file")->required();
  eval->add_option("--grid", eval_grid, "N or a:b:N[,a:b:N]")->required();
  eval->add_flag("--oracle", eval_oracle, "overlay the scalarization oracle");
  eval->add_option("--out,-o", eval_out, "mesh JSON file (stdout when omitted)");

  std::string oracle_problem, oracle_grid, oracle_region, oracle_out;
  auto* oracle = app.add_subcommand("oracle", "epsilon-constraint front on a grid");
  oracle->add_option("--problem", oracle_problem, "MOLP JSON file")->required();
  oracle->add_option("--grid", oracle_grid, "a:b:N[,a:b:N], or N with --region")->required();
  oracle->add_option("--region", oracle_region, "region JSON file");
  oracle->add_option("--out,-o", oracle_out, "JSON file (stdout when omitted)");

  std::string host = "127.0.0.1", store_dir;
  int port = 8080, workers = 1;
  bool async = false;
  auto* serve = app.add_subcommand("serve", "HTTP job API");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--store", store_dir, "run store directory (memory only when omitted)");
  serve->add_flag("--async", async, "queue jobs for worker threads");
  serve->add_option("--workers", workers)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*inner) return run_job(api::Task::kInner, inner_args);
    if (*outer) return run_job(api::Task::kOuter, outer_args);
    if (*certify) return run_job(api::Task::kCertificate, cert_args);
    if (*eval) {
      const auto res = api::result_from_json(read_json(eval_result));
      const auto grid = api::make_grid(res.request.region, eval_grid);
      write_text(eval_out, api::to_json(api::evaluate_surface(res, grid, eval_oracle)).dump(2));
      return 0;
    }
    if (*oracle) {
      const auto problem = molp::from_json(read_json(oracle_problem));
      std::vector<Vector> grid;
      if (!oracle_region.empty()) {
        grid = api::make_grid(regions::region_from_json(read_json(oracle_region)), oracle_grid);
      } else {
        grid = api::tensor_grid(oracle_grid);
      }
      nlohmann::json pts = nlohmann::json::array();
      for (const auto& p : molp::pareto_front_oracle(problem, grid)) {
        nlohmann::json j{{"u", std::vector<double>(p.u.data(), p.u.data() + p.u.size())}, {"feasible", p.feasible}};
        j["value"] = p.feasible ? nlohmann::json(p.value) : nlohmann::json(nullptr);
        pts.push_back(j);
      }
      write_text(oracle_out, nlohmann::json{{"v", api::kSchemaVersion}, {"points", pts}}.dump(2));
      return 0;
    }
    if (*serve) {
      api::RunStore store(store_dir);
      api::ServiceOptions opts;
      opts.async = async;
      opts.workers = workers;
      api::JobService service(store, opts);
      api::HttpServer server(service);
      const int bound = server.bind(host, port);
      if (bound < 0) fail(ErrorCode::kInvalidArgument, "cannot bind " + host + ":" + std::to_string(port));
      std::cerr << "listening on " << host << ":" << bound << "\n";
      server.listen();
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  }
  return 1;
}
