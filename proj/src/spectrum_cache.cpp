#include "elastica/spectrum_cache.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace elastica {

namespace {

using nlohmann::json;

json to_pair(cd z) { return json::array({z.real(), z.imag()}); }
cd from_pair(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

long long radius_key(double h) { return std::llround(h * 1e10); }

void sort_order(DiskSpectrum& ds) {
  ds.order.clear();
  for (int k = 0; k < ds.m; ++k)
    for (int j = 0; j < 2; ++j) ds.order.emplace_back(k, j);
  std::stable_sort(ds.order.begin(), ds.order.end(), [&](const auto& a, const auto& b) {
    return std::abs(ds.vals[a.first][a.second]) > std::abs(ds.vals[b.first][b.second]);
  });
}

}  // namespace

std::string spectrum_to_json(const DiskSpectrum& ds, const ElasticMedium& med) {
  json j;
  j["schema"] = kSpectrumSchema;
  j["kind"] = "disk_modal_spectrum";
  j["radius"] = ds.radius;
  j["lambda"] = med.lambda;
  j["mu"] = med.mu;
  j["omega"] = med.omega;
  j["m"] = ds.m;
  json modes = json::array();
  for (int k = 0; k < ds.m; ++k) {
    json vals = json::array({to_pair(ds.vals[k][0]), to_pair(ds.vals[k][1])});
    json vecs = json::array();
    for (int c = 0; c < 2; ++c)
      for (int r = 0; r < 2; ++r) vecs.push_back(to_pair(ds.vecs[k](r, c)));
    modes.push_back({{"values", vals}, {"vectors", vecs}});
  }
  j["modes"] = std::move(modes);
  return j.dump();
}

DiskSpectrum spectrum_from_json(const std::string& text, const ElasticMedium& med, int m) {
  const json j = json::parse(text);
  if (j.at("schema").get<int>() != kSpectrumSchema) throw std::runtime_error("spectrum cache: schema mismatch");
  if (j.at("lambda").get<double>() != med.lambda || j.at("mu").get<double>() != med.mu ||
      j.at("omega").get<double>() != med.omega || j.at("m").get<int>() != m) {
    throw std::runtime_error("spectrum cache: medium or direction count mismatch");
  }
  DiskSpectrum ds;
  ds.radius = j.at("radius").get<double>();
  ds.m = m;
  const json& modes = j.at("modes");
  if (static_cast<int>(modes.size()) != m) throw std::runtime_error("spectrum cache: wrong mode count");
  ds.vals.resize(m);
  ds.vecs.resize(m);
  for (int k = 0; k < m; ++k) {
    const json& md = modes[k];
    ds.vals[k] = Eigen::Vector2cd(from_pair(md.at("values").at(0)), from_pair(md.at("values").at(1)));
    for (int c = 0; c < 2; ++c)
      for (int r = 0; r < 2; ++r) ds.vecs[k](r, c) = from_pair(md.at("vectors").at(2 * c + r));
  }
  sort_order(ds);
  return ds;
}

SpectrumCache::SpectrumCache(const ElasticMedium& med, int m, std::optional<std::filesystem::path> dir,
                             bool enabled)
    : med_(med), m_(m), dir_(std::move(dir)), enabled_(enabled) {
  if (dir_ && enabled_) std::filesystem::create_directories(*dir_);
}

std::optional<std::filesystem::path> SpectrumCache::dir_from_env() {
  const char* v = std::getenv("ELASTICA_CACHE");
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::filesystem::path(v);
}

std::filesystem::path SpectrumCache::file_for(long long key) const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "disk_l%.17g_m%.17g_w%.17g_M%d_h%lld.json", med_.lambda, med_.mu, med_.omega, m_,
                key);
  return *dir_ / buf;
}

std::shared_ptr<const DiskSpectrum> SpectrumCache::load(long long key) const {
  if (!dir_) return nullptr;
  std::ifstream in(file_for(key));
  if (!in) return nullptr;
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return std::make_shared<const DiskSpectrum>(spectrum_from_json(ss.str(), med_, m_));
  } catch (const std::exception&) {
    return nullptr;  // stale or foreign file: recompute and overwrite
  }
}

void SpectrumCache::store(long long key, const DiskSpectrum& ds) const {
  if (!dir_) return;
  const auto target = file_for(key);
  std::ostringstream tmpname;
  tmpname << target.string() << ".tmp" << std::hash<std::thread::id>{}(std::this_thread::get_id());
  {
    std::ofstream out(tmpname.str(), std::ios::binary);
    if (!out) throw std::runtime_error("spectrum cache: cannot write " + tmpname.str());
    out << spectrum_to_json(ds, med_);
    if (!out) throw std::runtime_error("spectrum cache: write failed for " + tmpname.str());
  }
  std::filesystem::rename(tmpname.str(), target);
  ++writes_;
}

std::shared_ptr<const DiskSpectrum> SpectrumCache::get(double h) {
  const long long key = radius_key(h);
  // Always solve at the keyed radius so cached and uncached runs agree bit for bit.
  if (!enabled_) {
    ++misses_;
    return std::make_shared<const DiskSpectrum>(disk_modal_spectrum(key * 1e-10, med_, m_));
  }
  {
    std::shared_lock lock(mu_);
    auto it = mem_.find(key);
    if (it != mem_.end()) {
      ++memory_hits_;
      return it->second;
    }
  }
  std::shared_ptr<const DiskSpectrum> ds = load(key);
  if (ds) {
    ++disk_hits_;
  } else {
    ++misses_;
    ds = std::make_shared<const DiskSpectrum>(disk_modal_spectrum(key * 1e-10, med_, m_));
    store(key, *ds);
  }
  std::unique_lock lock(mu_);
  return mem_.emplace(key, ds).first->second;
}

SpectrumCache::Stats SpectrumCache::stats() const {
  return {memory_hits_.load(), disk_hits_.load(), misses_.load(), writes_.load()};
}

}  // namespace elastica
