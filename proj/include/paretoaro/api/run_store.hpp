#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace paretoaro::api {

std::uint64_t fnv1a64(std::string_view data);

// JSON documents keyed by content hash, kept in memory and mirrored to
// <directory>/<key>.json when a directory is given. Writes to one key are
// serialized; documents are replaced atomically on disk.
class RunStore {
 public:
  explicit RunStore(std::string directory = "");

  // 16 hex digits of the FNV-1a hash of the compact JSON dump.
  static std::string key(const nlohmann::json& doc);

  void put(const std::string& key, const nlohmann::json& doc);
  std::optional<nlohmann::json> get(const std::string& key) const;
  bool contains(const std::string& key) const;
  std::vector<std::string> keys() const;
  const std::string& directory() const { return dir_; }

 private:
  std::mutex& key_lock(const std::string& key);

  std::string dir_;
  mutable std::mutex mu_;
  std::map<std::string, nlohmann::json> docs_;
  std::map<std::string, std::unique_ptr<std::mutex>> key_locks_;
};

}  // namespace paretoaro::api
