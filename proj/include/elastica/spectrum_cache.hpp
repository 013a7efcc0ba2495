#ifndef ELASTICA_SPECTRUM_CACHE_HPP
#define ELASTICA_SPECTRUM_CACHE_HPP

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>

#include "elastica/ffop.hpp"

namespace elastica {

inline constexpr int kSpectrumSchema = 1;

/**
 * Origin-centered disk spectra keyed by radius (rounded to 1e-10) for one medium and M.
 *
 * With a directory, spectra are also persisted as JSON, one file per radius, written to a
 * temporary name and renamed into place. Readers never see partial files. A disabled cache
 * recomputes on every request; that is the cold baseline for timing.
 */
class SpectrumCache {
 public:
  struct Stats {
    long memory_hits = 0;
    long disk_hits = 0;
    long misses = 0;
    long writes = 0;
  };

  SpectrumCache(const ElasticMedium& med, int m, std::optional<std::filesystem::path> dir = std::nullopt,
                bool enabled = true);

  /// Throws ModeSingularityError from the underlying solve; failures are not cached.
  std::shared_ptr<const DiskSpectrum> get(double h);

  Stats stats() const;
  const ElasticMedium& medium() const { return med_; }
  int m() const { return m_; }
  bool enabled() const { return enabled_; }

  /// ELASTICA_CACHE if set and non-empty.
  static std::optional<std::filesystem::path> dir_from_env();

 private:
  std::filesystem::path file_for(long long key) const;
  std::shared_ptr<const DiskSpectrum> load(long long key) const;
  void store(long long key, const DiskSpectrum& ds) const;

  ElasticMedium med_;
  int m_;
  std::optional<std::filesystem::path> dir_;
  bool enabled_;
  mutable std::shared_mutex mu_;
  std::map<long long, std::shared_ptr<const DiskSpectrum>> mem_;
  std::atomic<long> memory_hits_{0}, disk_hits_{0}, misses_{0};
  mutable std::atomic<long> writes_{0};
};

/// JSON text of a spectrum; complex numbers as [re, im].
std::string spectrum_to_json(const DiskSpectrum& ds, const ElasticMedium& med);
/// Throws std::runtime_error on schema or medium mismatch.
DiskSpectrum spectrum_from_json(const std::string& text, const ElasticMedium& med, int m);

}  // namespace elastica

#endif  // ELASTICA_SPECTRUM_CACHE_HPP
