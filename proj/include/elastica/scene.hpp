#ifndef ELASTICA_SCENE_HPP
#define ELASTICA_SCENE_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "elastica/factorization.hpp"
#include "elastica/forward.hpp"

namespace elastica {

/// Invalid scene file. The message starts with the offending field path, e.g. "obstacle.radius: ...".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ImagingSettings {
  Vec2 lo{-2.0, -2.0};
  Vec2 hi{2.0, 2.0};
  int grid_n = 64;
  int n_theta = 64;
  double h_res = 0.01;
  double rho = 0.0;  ///< 0 picks the noise-dependent default
  CVec2 polarization{1.0, 0.0};
};

struct NodalSettings {
  Vec2 lo{-3.0, -3.0};
  Vec2 hi{3.0, 3.0};
  int n = 200;
  double tol = 1e-3;
};

struct LsmSettings {
  double theta = 0.0;
  double h_min = 0.2;
  double h_max = 6.0;
  int steps = 30;
  double alpha = 1e-8;
};

/**
 * Everything one run needs. Units are normalized: unit density, angles in radians.
 *
 * JSON layout (every key optional except medium and obstacle; unknown keys are errors):
 *   name, medium{lambda, mu, omega}, incident{theta, cp[re,im], cs[re,im]},
 *   obstacle{type: disk, center, radius | type: polygon, vertices},
 *   measurement{directions, radius}, noise{level, seed},
 *   solver{truncation, mfs_sources, mfs_collocation, svd_cutoff},
 *   imaging{lo, hi, grid_n, n_theta, h_res, rho, polarization[[re,im],[re,im]]},
 *   nodal{lo, hi, n, tol}, lsm{theta, h_min, h_max, steps, alpha}
 */
struct Scene {
  std::string name = "scene";
  ElasticMedium medium;
  double incident_theta = 0.0;
  cd incident_cp{1.0, 0.0};
  cd incident_cs{0.0, 0.0};
  Obstacle obstacle;
  int directions = 64;
  double radius = 3.0;
  double noise = 0.0;
  std::uint64_t seed = 1;
  int truncation = -1;
  MfsParams mfs;
  ImagingSettings imaging;
  NodalSettings nodal;
  LsmSettings lsm;
  std::string source_text;  ///< the parsed JSON, normalized, for the manifest echo

  PlaneWave incident() const;
  SamplingGeometry sampling() const;
  PicardConfig picard() const;
};

Scene parse_scene(const std::string& json_text);
Scene load_scene(const std::filesystem::path& path);
/// Rechecks invariants after flag overrides. Throws ConfigError.
void validate_scene(const Scene& s);

}  // namespace elastica

#endif  // ELASTICA_SCENE_HPP
