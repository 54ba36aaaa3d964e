#pragma once

#include <condition_variable>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "paretoaro/api/pipeline.hpp"
#include "paretoaro/api/run_store.hpp"
#include "paretoaro/common/error.hpp"

namespace httplib {
class Server;
}

namespace paretoaro::api {

struct ServiceOptions {
  // Synchronous jobs finish before submit returns; asynchronous jobs are
  // queued for the worker threads.
  bool async = false;
  int workers = 1;
  PipelineOptions pipeline;
};

// Job bookkeeping behind the HTTP endpoints. Job ids are content hashes of
// the canonical request, so identical requests share one job.
class JobService {
 public:
  JobService(RunStore& store, ServiceOptions options = {});
  ~JobService();
  JobService(const JobService&) = delete;
  JobService& operator=(const JobService&) = delete;

  // Parses and plans the request (throws Error on rejection); returns the id.
  std::string submit(const nlohmann::json& request);
  // {"v", "id", "state"} plus the result or error once the job has finished.
  // Throws Error(kNotFound).
  nlohmann::json status(const std::string& id) const;
  // body: {"region": {...}, "degree": optional}. Throws kNotFound,
  // kInvalidArgument (parent unfinished) or kNotContained.
  std::string refine(const std::string& id, const nlohmann::json& body);
  nlohmann::json surface(const std::string& id, const std::string& grid, bool with_oracle) const;
  // Blocks until the job has finished.
  void wait(const std::string& id) const;

 private:
  void execute(const std::string& id, const ApproximationRequest& request);
  void worker_loop();
  ApproximationResult finished_result(const std::string& id) const;

  RunStore& store_;
  ServiceOptions options_;
  mutable std::mutex mu_;
  mutable std::condition_variable changed_;
  std::map<std::string, std::string> states_;  // pending | running
  std::deque<std::pair<std::string, ApproximationRequest>> queue_;
  std::vector<std::thread> workers_;
  bool stopping_ = false;
};

// HTTP status used for a library error.
int http_status(ErrorCode code);

// HTTP front end: POST /jobs, GET /jobs/{id}, POST /jobs/{id}/refine,
// GET /jobs/{id}/surface?grid=...&oracle=1.
class HttpServer {
 public:
  explicit HttpServer(JobService& service);
  ~HttpServer();

  // Binds to `port` (0 picks a free port) and returns the bound port.
  int bind(const std::string& host, int port);
  // Serves until stop(); call after bind().
  void listen();
  void stop();

 private:
  JobService& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace paretoaro::api
