#include "paretoaro/api/run_store.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "paretoaro/common/error.hpp"

namespace paretoaro::api {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

RunStore::RunStore(std::string directory) : dir_(std::move(directory)) {
  if (dir_.empty()) return;
  std::filesystem::create_directories(dir_);
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path());
    try {
      docs_[entry.path().stem().string()] = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception&) {
      // Unreadable documents are ignored; they are rewritten on the next put.
    }
  }
}

std::string RunStore::key(const nlohmann::json& doc) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(doc.dump())));
  return buf;
}

std::mutex& RunStore::key_lock(const std::string& key) {
  std::lock_guard<std::mutex> lock(mu_);
  auto& m = key_locks_[key];
  if (!m) m = std::make_unique<std::mutex>();
  return *m;
}

void RunStore::put(const std::string& key, const nlohmann::json& doc) {
  std::lock_guard<std::mutex> write(key_lock(key));
  if (!dir_.empty()) {
    const auto path = std::filesystem::path(dir_) / (key + ".json");
    const auto tmp = std::filesystem::path(dir_) / (key + ".json.tmp");
    {
      std::ofstream out(tmp);
      if (!out) fail(ErrorCode::kInvalidArgument, "cannot write " + tmp.string());
      out << doc.dump(2) << "\n";
    }
    std::filesystem::rename(tmp, path);
  }
  std::lock_guard<std::mutex> lock(mu_);
  docs_[key] = doc;
}

std::optional<nlohmann::json> RunStore::get(const std::string& key) const {
  std::lock_guard<std::mutex> lock(mu_);
  const auto it = docs_.find(key);
  if (it == docs_.end()) return std::nullopt;
  return it->second;
}

bool RunStore::contains(const std::string& key) const {
  std::lock_guard<std::mutex> lock(mu_);
  return docs_.count(key) > 0;
}

std::vector<std::string> RunStore::keys() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::string> out;
  for (const auto& [k, v] : docs_) out.push_back(k);
  return out;
}

}  // namespace paretoaro::api
