#include "elastica/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <openssl/evp.h>

namespace elastica {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    char b[3];
    std::snprintf(b, sizeof b, "%02x", md[i]);
    hex += b;
  }
  return hex;
}

RunManifest::RunManifest(std::string command, const std::string& config_json) {
  data_["command"] = std::move(command);
  data_["version"] = kVersion;
  data_["config"] = nlohmann::json::parse(config_json);
  data_["outputs"] = nlohmann::json::object();
  data_["timings_s"] = nlohmann::json::object();
}

void RunManifest::add_output(const std::filesystem::path& path) {
  data_["outputs"][path.filename().string()] = sha256_file(path);
}

void RunManifest::add_timing(const std::string& stage, double seconds) { data_["timings_s"][stage] = seconds; }

void RunManifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << data_.dump(2) << '\n';
}

}  // namespace elastica
