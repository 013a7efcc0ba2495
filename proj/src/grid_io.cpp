#include "elastica/grid_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace elastica {

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

std::pair<double, double> bounds(const IndicatorGrid& g) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    if (g.mask[k]) continue;
    lo = std::min(lo, g.values[k]);
    hi = std::max(hi, g.values[k]);
  }
  return {lo, hi};
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<std::uint16_t> grid_levels(const IndicatorGrid& g) {
  const auto [lo, hi] = bounds(g);
  std::vector<std::uint16_t> out(g.values.size(), 0);
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    if (g.mask[k]) continue;
    if (!(hi > lo)) {
      out[k] = 65535;
      continue;
    }
    const double t = (g.values[k] - lo) / (hi - lo);
    out[k] = static_cast<std::uint16_t>(1 + std::lround(t * 65534.0));
  }
  return out;
}

GridFiles write_grid(const IndicatorGrid& g, const std::filesystem::path& basename) {
  GridFiles files{basename, basename, basename};
  files.csv += ".csv";
  files.pgm += ".pgm";
  files.sidecar += ".json";
  {
    auto out = open_out(files.csv);
    out << "x,y,value,mask\n";
    for (int r = 0; r < g.ny; ++r) {
      for (int c = 0; c < g.nx; ++c) {
        const Vec2 p = g.point(r, c);
        const std::size_t k = g.index(r, c);
        out << fmt17(p.x()) << ',' << fmt17(p.y()) << ',' << fmt17(g.values[k]) << ',' << int(g.mask[k]) << '\n';
      }
    }
    if (!out) throw std::runtime_error("write failed for " + files.csv.string());
  }
  {
    auto out = open_out(files.pgm);
    out << "P5\n" << g.nx << ' ' << g.ny << "\n65535\n";
    for (std::uint16_t v : grid_levels(g)) {
      const char bytes[2] = {static_cast<char>(v >> 8), static_cast<char>(v & 0xff)};
      out.write(bytes, 2);
    }
    if (!out) throw std::runtime_error("write failed for " + files.pgm.string());
  }
  {
    const auto [lo, hi] = bounds(g);
    const auto masked = std::count(g.mask.begin(), g.mask.end(), std::uint8_t{1});
    nlohmann::json j;
    j["nx"] = g.nx;
    j["ny"] = g.ny;
    j["lo"] = {g.lo.x(), g.lo.y()};
    j["hi"] = {g.hi.x(), g.hi.y()};
    j["masked_cells"] = masked;
    j["value_min"] = masked == static_cast<long>(g.mask.size()) ? nlohmann::json() : nlohmann::json(lo);
    j["value_max"] = masked == static_cast<long>(g.mask.size()) ? nlohmann::json() : nlohmann::json(hi);
    j["pgm_levels"] = {1, 65535};
    j["pgm_masked_level"] = 0;
    auto out = open_out(files.sidecar);
    out << j.dump(2) << '\n';
  }
  return files;
}

IndicatorGrid read_grid_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "x,y,value,mask") throw std::runtime_error(path.string() + ": bad header");
  std::vector<Vec2> pts;
  std::vector<double> vals;
  std::vector<std::uint8_t> mask;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string f[4];
    for (auto& s : f) {
      if (!std::getline(ls, s, ',')) throw std::runtime_error(path.string() + ": short row");
    }
    pts.emplace_back(std::stod(f[0]), std::stod(f[1]));
    vals.push_back(std::stod(f[2]));
    mask.push_back(static_cast<std::uint8_t>(std::stoi(f[3])));
  }
  if (pts.size() < 4) throw std::runtime_error(path.string() + ": too few rows");
  int nx = 1;
  while (nx < static_cast<int>(pts.size()) && pts[nx].y() == pts[0].y()) ++nx;
  if (pts.size() % nx != 0) throw std::runtime_error(path.string() + ": ragged grid");
  const int ny = static_cast<int>(pts.size() / nx);
  IndicatorGrid g = IndicatorGrid::make(Vec2(pts.front().x(), pts.back().y()), Vec2(pts.back().x(), pts.front().y()),
                                        nx, ny);
  g.values = std::move(vals);
  g.mask = std::move(mask);
  return g;
}

}  // namespace elastica
