#ifndef ELASTICA_COMMANDS_HPP
#define ELASTICA_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "elastica/noise.hpp"
#include "elastica/scene.hpp"

namespace elastica {

enum ExitCode : int { kExitOk = 0, kExitGate = 1, kExitUsage = 2 };

/// Flag overrides on top of the scene file.
struct RunOptions {
  std::string command;
  std::filesystem::path config;
  std::filesystem::path out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> noise;
  std::optional<double> rho;
  std::optional<int> grid_n;
  std::optional<int> n_theta;
  std::optional<std::filesystem::path> cache_dir;  ///< overrides ELASTICA_CACHE
  bool no_cache = false;                           ///< recompute every sampling-disk spectrum
  unsigned threads = 0;                            ///< 0: hardware concurrency
};

const std::vector<std::string>& command_names();

/// Boundary residual above this fails the forward gate.
inline constexpr double kForwardGate = 1e-3;

/// Runs one command, writing products and manifest.json under opts.out. Progress and
/// errors go to `log`. Returns an ExitCode; never throws.
int run_command(const RunOptions& opts, std::ostream& log);

/// Measured data of a scene: the scattered far field for the scene's incident wave,
/// with the scene's noise applied.
struct MeasuredData {
  ScatterSolution solution;
  FarFieldPattern clean;
  NoisyPattern noisy;
};
MeasuredData measure_scene(const Scene& scene, unsigned threads);

/// Obstacle area (disk or shoelace polygon).
double obstacle_area(const Obstacle& ob);

}  // namespace elastica

#endif  // ELASTICA_COMMANDS_HPP
