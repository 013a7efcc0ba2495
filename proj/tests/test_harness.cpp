#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "elastica/commands.hpp"
#include "elastica/grid_io.hpp"
#include "elastica/noise.hpp"
#include "elastica/scene.hpp"

using namespace elastica;
namespace fs = std::filesystem;

namespace {

const std::string kDisk = R"({"medium": {"lambda": 2, "mu": 1, "omega": 1},
  "obstacle": {"type": "disk", "center": [0.5, 0], "radius": 0.7}})";

std::string config_error(const std::string& text) {
  try {
    parse_scene(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  return s.replace(s.find(from), from.size(), to);
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("elastica_harness_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("scene parsing defaults and errors") {
    const Scene s = parse_scene(kDisk);
    CHECK(s.directions == 64);
    CHECK(s.radius == 3.0);
    CHECK(s.imaging.grid_n == 64);
    CHECK(s.picard().rho == 1e-12);

    CHECK(config_error(replace(kDisk, "\"radius\": 0.7", "\"radius\": 0.7, \"colour\": 1")) ==
          "obstacle.colour: unknown key");
    CHECK(config_error(replace(kDisk, "\"radius\": 0.7", "\"radius\": -1")).rfind("obstacle.radius:", 0) == 0);
    CHECK(config_error(replace(kDisk, "\"mu\": 1", "\"mu\": \"one\"")).rfind("medium.mu:", 0) == 0);
    CHECK(config_error(replace(kDisk, "\"radius\": 0.7", "\"radius\": 3.5")).rfind("obstacle:", 0) == 0);
    CHECK(config_error("{\"medium\": {\"lambda\": 2, \"mu\": 1, \"omega\": 1}}") == "obstacle: missing");
    CHECK(config_error("{not json").rfind("scene: malformed JSON", 0) == 0);
    const std::string noisy = replace(kDisk, "\"obstacle\"", "\"noise\": {\"level\": 0.02}, \"obstacle\"");
    CHECK(parse_scene(noisy).picard().rho == doctest::Approx(0.2));
  }

  TEST_CASE("noise injection") {
    FarFieldPattern ff = make_pattern(32);
    for (int m = 0; m < 32; ++m) {
      ff.up[m] = cd(1.0 + m, -0.5);
      ff.us[m] = cd(0.25, 0.1 * m);
    }
    const auto none = inject_noise(ff, 0.0, 3);
    CHECK(none.pattern.up == ff.up);
    CHECK(none.pattern.us == ff.us);
    CHECK(none.relative_perturbation == 0.0);
    const auto a = inject_noise(ff, 0.02, 9);
    const auto b = inject_noise(ff, 0.02, 9);
    const auto c = inject_noise(ff, 0.02, 10);
    CHECK(a.pattern.up == b.pattern.up);
    CHECK(a.pattern.us == b.pattern.us);
    CHECK(a.pattern.up != c.pattern.up);
    CHECK(a.relative_perturbation > 0.01);
    CHECK(a.relative_perturbation < 0.04);
    CHECK_THROWS_AS(inject_noise(ff, -0.1, 1), std::invalid_argument);
  }

  TEST_CASE("grid output") {
    const auto dir = scratch("grid");
    auto g = IndicatorGrid::make(Vec2(-1, -1), Vec2(1, 1), 4, 3);
    for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] = 0.1 * static_cast<double>(i) + 1.0 / 3.0;
    g.mask[5] = 1;
    write_grid(g, dir / "ind");
    const auto back = read_grid_csv(dir / "ind.csv");
    CHECK(back.nx == 4);
    CHECK(back.ny == 3);
    CHECK(back.mask == g.mask);
    for (std::size_t i = 0; i < g.values.size(); ++i)
      if (!g.mask[i]) CHECK(back.values[i] == g.values[i]);
    const auto levels = grid_levels(g);
    CHECK(levels[5] == 0);
    CHECK(levels[0] == 1);
    CHECK(levels.back() == 65535);

    // P5 header followed by big-endian 16-bit samples.
    std::ifstream pgm(dir / "ind.pgm", std::ios::binary);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    pgm >> magic >> w >> h >> maxval;
    pgm.get();
    CHECK(magic == "P5");
    CHECK(w == 4);
    CHECK(h == 3);
    CHECK(maxval == 65535);
    unsigned char px[2];
    pgm.read(reinterpret_cast<char*>(px), 2);
    CHECK((px[0] << 8 | px[1]) == levels[0]);

    auto flat = g;
    std::fill(flat.values.begin(), flat.values.end(), 2.0);
    std::fill(flat.mask.begin(), flat.mask.end(), 0);
    for (auto v : grid_levels(flat)) CHECK(v == 65535);
    fs::remove_all(dir);
  }

  TEST_CASE("run_command usage errors") {
    const auto dir = scratch("cmd");
    std::ostringstream log;
    RunOptions opts;
    opts.command = "transmogrify";
    opts.out = dir / "a";
    CHECK(run_command(opts, log) == kExitUsage);

    {
      std::ofstream(dir / "bad.json") << replace(kDisk, "\"radius\": 0.7", "\"radius\": 0.7, \"extra\": 1");
    }
    opts.command = "forward";
    opts.config = dir / "bad.json";
    opts.out = dir / "b";
    CHECK(run_command(opts, log) == kExitUsage);
    CHECK(log.str().find("obstacle.extra") != std::string::npos);

    opts.config = dir / "missing.json";
    CHECK(run_command(opts, log) == kExitUsage);
    fs::remove_all(dir);
  }

  TEST_CASE("forward run writes data and a manifest") {
    const auto dir = scratch("fwd");
    {
      std::ofstream(dir / "disk.json") << kDisk;
    }
    std::ostringstream log;
    RunOptions opts;
    opts.command = "forward";
    opts.config = dir / "disk.json";
    opts.out = dir / "out";
    opts.threads = 1;
    CHECK(run_command(opts, log) == kExitOk);
    CHECK(fs::exists(dir / "out" / "farfield.csv"));
    CHECK(fs::exists(dir / "out" / "manifest.json"));
    const auto ff = read_farfield_csv((dir / "out" / "farfield.csv").string());
    CHECK(ff.size() == 64);
    fs::remove_all(dir);
  }
}
