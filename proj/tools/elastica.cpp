#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "elastica/commands.hpp"

int main(int argc, char** argv) {
  using namespace elastica;
  CLI::App app{"Elastic obstacle scattering: forward solves and factorization-method imaging"};
  RunOptions o;
  std::string commands;
  for (const auto& n : command_names()) commands += (commands.empty() ? "" : ", ") + n;
  app.add_option("command", o.command, "One of: " + commands)->required();
  app.add_option("--config", o.config, "Scene JSON file")->required();
  app.add_option("--out", o.out, "Output directory")->capture_default_str();
  std::uint64_t seed = 0;
  double noise = 0.0, rho = 0.0;
  int grid_n = 0, ntheta = 0;
  std::string cache_dir;
  auto* seed_opt = app.add_option("--seed", seed, "Noise seed");
  auto* noise_opt = app.add_option("--noise", noise, "Relative noise level eps")->check(CLI::NonNegativeNumber);
  auto* rho_opt = app.add_option("--truncation-rho", rho, "Relative Picard cutoff in (0, 1)");
  auto* grid_opt = app.add_option("--grid-n", grid_n, "Indicator grid points per side")->check(CLI::Range(2, 100000));
  auto* theta_opt = app.add_option("--ntheta", ntheta, "Sampling angles")->check(CLI::Range(1, 100000));
  auto* cache_opt = app.add_option("--cache-dir", cache_dir, "Spectrum cache directory (overrides ELASTICA_CACHE)");
  app.add_flag("--no-cache", o.no_cache, "Recompute every sampling-disk spectrum");
  app.add_option("--threads", o.threads, "Worker threads, 0 for all cores")->capture_default_str();
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  if (*seed_opt) o.seed = seed;
  if (*noise_opt) o.noise = noise;
  if (*rho_opt) o.rho = rho;
  if (*grid_opt) o.grid_n = grid_n;
  if (*theta_opt) o.n_theta = ntheta;
  if (*cache_opt) o.cache_dir = cache_dir;
  return run_command(o, std::cerr);
}
