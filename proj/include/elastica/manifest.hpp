#ifndef ELASTICA_MANIFEST_HPP
#define ELASTICA_MANIFEST_HPP

#include <chrono>
#include <filesystem>
#include <string>

#include "json.hpp"

namespace elastica {

inline constexpr const char* kVersion = "0.1.0";

/// Lowercase hex SHA-256 of a file's bytes. Throws std::runtime_error if unreadable.
std::string sha256_file(const std::filesystem::path& path);

/**
 * Record of one command run: config echo, version, seeds, cache counters, per-stage wall
 * clock and output digests. Timings vary between runs; the data files it lists do not.
 */
class RunManifest {
 public:
  RunManifest(std::string command, const std::string& config_json);

  nlohmann::json& operator[](const std::string& key) { return data_[key]; }
  void add_output(const std::filesystem::path& path);
  void add_timing(const std::string& stage, double seconds);
  void write(const std::filesystem::path& path) const;
  const nlohmann::json& data() const { return data_; }

 private:
  nlohmann::json data_;
};

/// Wall-clock seconds since construction.
class StageTimer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace elastica

#endif  // ELASTICA_MANIFEST_HPP
