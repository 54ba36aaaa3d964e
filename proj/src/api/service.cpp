#include "paretoaro/api/service.hpp"

#include <httplib.h>

#include "paretoaro/api/grid.hpp"

namespace paretoaro::api {

namespace {

nlohmann::json error_json(const std::string& code, const std::string& message) {
  return {{"v", kSchemaVersion}, {"error", {{"code", code}, {"message", message}}}};
}

// Rejects requests the planner cannot handle before a job is created.
void check_plan(const ApproximationRequest& r) {
  const auto issues = molp::validate(r.problem);
  if (!issues.empty()) fail(ErrorCode::kInvalidArgument, "invalid problem: " + issues.front());
  regions::validate(r.region);
  switch (r.task) {
    case Task::kInner: robust::plan(r.problem, r.region, r.degree, r.shape, r.objective, r.method); break;
    case Task::kOuter: robust::plan_outer(r.problem, r.region, r.degree); break;
    case Task::kCertificate:
      require(r.bound.has_value(), ErrorCode::kInvalidArgument, "certificate request needs a bound");
      robust::plan_certificate(r.problem, r.region, r.degree, r.bound->degree());
      break;
  }
}

}  // namespace

JobService::JobService(RunStore& store, ServiceOptions options) : store_(store), options_(std::move(options)) {
  if (options_.async) {
    for (int i = 0; i < std::max(1, options_.workers); ++i) workers_.emplace_back([this] { worker_loop(); });
  }
}

JobService::~JobService() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    stopping_ = true;
  }
  changed_.notify_all();
  for (auto& t : workers_) t.join();
}

std::string JobService::submit(const nlohmann::json& request) {
  const ApproximationRequest req = request_from_json(request);
  check_plan(req);
  const std::string id = RunStore::key(to_json(req));
  {
    std::unique_lock<std::mutex> lock(mu_);
    if (states_.count(id) > 0 || store_.contains(id)) return id;
    if (options_.async) {
      states_[id] = "pending";
      queue_.emplace_back(id, req);
      lock.unlock();
      changed_.notify_all();
      return id;
    }
    states_[id] = "running";
  }
  execute(id, req);
  return id;
}

void JobService::execute(const std::string& id, const ApproximationRequest& request) {
  nlohmann::json doc;
  try {
    doc = to_json(run(request, options_.pipeline));
    doc["state"] = "done";
  } catch (const Error& e) {
    doc = error_json(std::string(to_string(e.code())), e.what());
    doc["request"] = to_json(request);
    doc["state"] = "failed";
  } catch (const std::exception& e) {
    doc = error_json("Internal", e.what());
    doc["request"] = to_json(request);
    doc["state"] = "failed";
  }
  doc["id"] = id;
  store_.put(id, doc);
  {
    std::lock_guard<std::mutex> lock(mu_);
    states_.erase(id);
  }
  changed_.notify_all();
}

void JobService::worker_loop() {
  while (true) {
    std::pair<std::string, ApproximationRequest> job;
    {
      std::unique_lock<std::mutex> lock(mu_);
      changed_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      job = std::move(queue_.front());
      queue_.pop_front();
      states_[job.first] = "running";
    }
    execute(job.first, job.second);
  }
}

nlohmann::json JobService::status(const std::string& id) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    const auto it = states_.find(id);
    if (it != states_.end()) return {{"v", kSchemaVersion}, {"id", id}, {"state", it->second}};
  }
  auto doc = store_.get(id);
  if (!doc) fail(ErrorCode::kNotFound, "unknown job " + id);
  return *doc;
}

void JobService::wait(const std::string& id) const {
  std::unique_lock<std::mutex> lock(mu_);
  changed_.wait(lock, [&] { return states_.count(id) == 0; });
}

ApproximationResult JobService::finished_result(const std::string& id) const {
  const nlohmann::json doc = status(id);
  const std::string state = doc.value("state", std::string());
  if (state != "done") fail(ErrorCode::kInvalidArgument, "job " + id + " has not completed (state " + state + ")");
  return result_from_json(doc);
}

std::string JobService::refine(const std::string& id, const nlohmann::json& body) {
  const ApproximationResult parent = finished_result(id);
  if (!body.is_object() || !body.contains("region")) fail(ErrorCode::kParseError, "refine body needs 'region'");
  const regions::Region sub = regions::region_from_json(body.at("region"));
  std::optional<int> degree;
  if (body.contains("degree")) degree = body.at("degree").get<int>();
  return submit(to_json(api::refine(parent, sub, degree)));
}

nlohmann::json JobService::surface(const std::string& id, const std::string& grid, bool with_oracle) const {
  const ApproximationResult res = finished_result(id);
  nlohmann::json j = to_json(evaluate_surface(res, make_grid(res.request.region, grid), with_oracle));
  j["id"] = id;
  return j;
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kNotContained: return 422;
    case ErrorCode::kSolverFailure:
    case ErrorCode::kNumericalBreakdown: return 500;
    default: return 400;
  }
}

HttpServer::HttpServer(JobService& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto& srv = *server_;
  auto reply = [](httplib::Response& res, int code, const nlohmann::json& body) {
    res.status = code;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(body.dump(), "application/json");
  };
  // Runs a handler, turning library and parse errors into JSON error bodies.
  auto guarded = [reply](auto&& handler) {
    return [reply, handler](const httplib::Request& req, httplib::Response& res) {
      try {
        handler(req, res);
      } catch (const Error& e) {
        reply(res, http_status(e.code()), error_json(std::string(to_string(e.code())), e.what()));
      } catch (const nlohmann::json::exception& e) {
        reply(res, 400, error_json("ParseError", e.what()));
      } catch (const std::exception& e) {
        reply(res, 500, error_json("Internal", e.what()));
      }
    };
  };
  auto job_reply = [reply](httplib::Response& res, int code, const std::string& id, const nlohmann::json& st) {
    reply(res, code, {{"v", kSchemaVersion}, {"id", id}, {"state", st.value("state", std::string())}});
  };

  // CORS preflight for browser clients posting JSON.
  srv.Options(R"(/jobs.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });
  srv.Post("/jobs", guarded([this, job_reply](const httplib::Request& req, httplib::Response& res) {
             const std::string id = service_.submit(nlohmann::json::parse(req.body));
             job_reply(res, 201, id, service_.status(id));
           }));
  srv.Get(R"(/jobs/([0-9a-f]+))", guarded([this, reply](const httplib::Request& req, httplib::Response& res) {
            const nlohmann::json st = service_.status(req.matches[1]);
            const std::string state = st.value("state", std::string());
            reply(res, state == "pending" || state == "running" ? 202 : 200, st);
          }));
  srv.Post(R"(/jobs/([0-9a-f]+)/refine)",
           guarded([this, job_reply](const httplib::Request& req, httplib::Response& res) {
             const std::string id = service_.refine(req.matches[1], nlohmann::json::parse(req.body));
             job_reply(res, 201, id, service_.status(id));
           }));
  srv.Get(R"(/jobs/([0-9a-f]+)/surface)", guarded([this, reply](const httplib::Request& req, httplib::Response& res) {
            if (!req.has_param("grid")) fail(ErrorCode::kBadGrid, "missing grid parameter");
            const std::string oracle = req.has_param("oracle") ? req.get_param_value("oracle") : "0";
            reply(res, 200, service_.surface(req.matches[1], req.get_param_value("grid"), oracle == "1" || oracle == "true"));
          }));
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

void HttpServer::listen() { server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_) server_->stop();
}

}  // namespace paretoaro::api
