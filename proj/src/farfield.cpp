#include "elastica/farfield.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace elastica {

Eigen::VectorXcd FarFieldPattern::stacked() const {
  Eigen::VectorXcd v(2 * size());
  v << up, us;
  return v;
}

double FarFieldPattern::l2_norm() const {
  double s = 0.0;
  for (int m = 0; m < size(); ++m) s += weights[m] * (std::norm(up[m]) + std::norm(us[m]));
  return std::sqrt(s);
}

std::vector<Vec2> uniform_directions(int m) {
  if (m <= 0) throw std::invalid_argument("uniform_directions: M must be positive");
  std::vector<Vec2> dirs(m);
  for (int i = 0; i < m; ++i) {
    const double t = 2.0 * std::numbers::pi * i / m;
    dirs[i] = Vec2(std::cos(t), std::sin(t));
  }
  return dirs;
}

FarFieldPattern make_pattern(int m) {
  FarFieldPattern ff;
  ff.directions = uniform_directions(m);
  ff.weights.assign(m, 2.0 * std::numbers::pi / m);
  ff.up = Eigen::VectorXcd::Zero(m);
  ff.us = Eigen::VectorXcd::Zero(m);
  return ff;
}

double relative_l2(const FarFieldPattern& a, const FarFieldPattern& b) {
  if (a.size() != b.size()) throw std::invalid_argument("relative_l2: direction grids differ");
  FarFieldPattern diff = a;
  diff.up -= b.up;
  diff.us -= b.us;
  return diff.l2_norm() / b.l2_norm();
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_farfield_csv(std::ostream& os, const FarFieldPattern& ff) {
  os << "m,dirx,diry,re_up,im_up,re_us,im_us\n";
  for (int m = 0; m < ff.size(); ++m) {
    os << m << ',' << fmt17(ff.directions[m].x()) << ',' << fmt17(ff.directions[m].y()) << ','
       << fmt17(ff.up[m].real()) << ',' << fmt17(ff.up[m].imag()) << ','
       << fmt17(ff.us[m].real()) << ',' << fmt17(ff.us[m].imag()) << '\n';
  }
}

void write_farfield_csv(const std::string& path, const FarFieldPattern& ff) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_farfield_csv(os, ff);
  if (!os) throw std::runtime_error("write failed: " + path);
}

FarFieldPattern read_farfield_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::getline(is, line);
  if (line != "m,dirx,diry,re_up,im_up,re_us,im_us") {
    throw std::runtime_error(path + ": unexpected far-field header");
  }
  std::vector<std::array<double, 6>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    std::array<double, 6> r{};
    for (double& v : r) {
      if (!std::getline(ss, cell, ',')) throw std::runtime_error(path + ": short row");
      v = std::stod(cell);
    }
    rows.push_back(r);
  }
  FarFieldPattern ff = make_pattern(static_cast<int>(rows.size()));
  for (std::size_t m = 0; m < rows.size(); ++m) {
    ff.directions[m] = Vec2(rows[m][0], rows[m][1]);
    ff.up[m] = cd(rows[m][2], rows[m][3]);
    ff.us[m] = cd(rows[m][4], rows[m][5]);
  }
  return ff;
}

}  // namespace elastica
