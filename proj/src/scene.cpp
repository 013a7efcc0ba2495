#include "elastica/scene.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace elastica {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double get_number(const json& obj, const std::string& path, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(join(path, key), "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(join(path, key), "must be finite");
  return d;
}

int get_int(const json& obj, const std::string& path, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
  return v.get<int>();
}

Vec2 to_vec2(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) fail(path, "expected [x, y]");
  return {v[0].get<double>(), v[1].get<double>()};
}

cd to_complex(const json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) fail(path, "expected [re, im]");
  return {v[0].get<double>(), v[1].get<double>()};
}

Vec2 get_vec2(const json& obj, const std::string& path, const std::string& key, const Vec2& fallback) {
  return obj.contains(key) ? to_vec2(obj.at(key), join(path, key)) : fallback;
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) fail(join(path, key), "missing");
  return obj.at(key);
}

Obstacle parse_obstacle(const json& o) {
  if (!o.is_object()) fail("obstacle", "expected an object");
  const json& type = require(o, "obstacle", "type");
  if (type == "disk") {
    check_keys(o, "obstacle", {"type", "center", "radius"});
    const double r = get_number(o, "obstacle", "radius", 0.0);
    if (!(r > 0.0)) fail("obstacle.radius", "must be positive");
    return make_disk(get_vec2(o, "obstacle", "center", Vec2::Zero()), r);
  }
  if (type == "polygon") {
    check_keys(o, "obstacle", {"type", "vertices"});
    const json& vs = require(o, "obstacle", "vertices");
    if (!vs.is_array()) fail("obstacle.vertices", "expected an array of [x, y]");
    std::vector<Vec2> v;
    for (std::size_t i = 0; i < vs.size(); ++i) v.push_back(to_vec2(vs[i], "obstacle.vertices[" + std::to_string(i) + "]"));
    try {
      return make_polygon(std::move(v));
    } catch (const std::invalid_argument& e) {
      fail("obstacle.vertices", e.what());
    }
  }
  fail("obstacle.type", "expected \"disk\" or \"polygon\"");
}

}  // namespace

PlaneWave Scene::incident() const { return make_plane_wave(incident_theta, incident_cp, incident_cs); }

SamplingGeometry Scene::sampling() const {
  SamplingGeometry g;
  g.radius = radius;
  g.n_theta = imaging.n_theta;
  g.h_res = imaging.h_res;
  return g;
}

PicardConfig Scene::picard() const {
  PicardConfig c = PicardConfig::for_noise(noise);
  if (imaging.rho > 0.0) c.rho = imaging.rho;
  return c;
}

Scene parse_scene(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scene: malformed JSON: ") + e.what());
  }
  check_keys(j, "", {"name", "medium", "incident", "obstacle", "measurement", "noise", "solver", "imaging", "nodal", "lsm"});
  Scene s;
  if (j.contains("name")) {
    if (!j.at("name").is_string()) fail("name", "expected a string");
    s.name = j.at("name").get<std::string>();
  }

  const json& m = require(j, "", "medium");
  check_keys(m, "medium", {"lambda", "mu", "omega"});
  try {
    s.medium = make_medium(get_number(m, "medium", "lambda", NAN), get_number(m, "medium", "mu", NAN),
                           get_number(m, "medium", "omega", NAN));
  } catch (const std::invalid_argument& e) {
    fail("medium", e.what());
  }

  if (j.contains("incident")) {
    const json& in = j.at("incident");
    check_keys(in, "incident", {"theta", "cp", "cs"});
    s.incident_theta = get_number(in, "incident", "theta", 0.0);
    if (in.contains("cp")) s.incident_cp = to_complex(in.at("cp"), "incident.cp");
    if (in.contains("cs")) s.incident_cs = to_complex(in.at("cs"), "incident.cs");
  }

  s.obstacle = parse_obstacle(require(j, "", "obstacle"));

  if (j.contains("measurement")) {
    const json& ms = j.at("measurement");
    check_keys(ms, "measurement", {"directions", "radius"});
    s.directions = get_int(ms, "measurement", "directions", s.directions);
    s.radius = get_number(ms, "measurement", "radius", s.radius);
  }
  if (j.contains("noise")) {
    const json& n = j.at("noise");
    check_keys(n, "noise", {"level", "seed"});
    s.noise = get_number(n, "noise", "level", 0.0);
    if (n.contains("seed")) {
      if (!n.at("seed").is_number_unsigned()) fail("noise.seed", "expected a nonnegative integer");
      s.seed = n.at("seed").get<std::uint64_t>();
    }
  }
  if (j.contains("solver")) {
    const json& so = j.at("solver");
    check_keys(so, "solver", {"truncation", "mfs_sources", "mfs_collocation", "svd_cutoff"});
    s.truncation = get_int(so, "solver", "truncation", -1);
    s.mfs.n_sources = get_int(so, "solver", "mfs_sources", 0);
    s.mfs.n_collocation = get_int(so, "solver", "mfs_collocation", 0);
    s.mfs.svd_cutoff = get_number(so, "solver", "svd_cutoff", s.mfs.svd_cutoff);
  }
  if (j.contains("imaging")) {
    const json& im = j.at("imaging");
    check_keys(im, "imaging", {"lo", "hi", "grid_n", "n_theta", "h_res", "rho", "polarization"});
    s.imaging.lo = get_vec2(im, "imaging", "lo", s.imaging.lo);
    s.imaging.hi = get_vec2(im, "imaging", "hi", s.imaging.hi);
    s.imaging.grid_n = get_int(im, "imaging", "grid_n", s.imaging.grid_n);
    s.imaging.n_theta = get_int(im, "imaging", "n_theta", s.imaging.n_theta);
    s.imaging.h_res = get_number(im, "imaging", "h_res", s.imaging.h_res);
    s.imaging.rho = get_number(im, "imaging", "rho", 0.0);
    if (im.contains("polarization")) {
      const json& p = im.at("polarization");
      if (!p.is_array() || p.size() != 2) fail("imaging.polarization", "expected two components");
      s.imaging.polarization = CVec2(to_complex(p[0], "imaging.polarization[0]"),
                                     to_complex(p[1], "imaging.polarization[1]"));
    }
  }
  if (j.contains("nodal")) {
    const json& nd = j.at("nodal");
    check_keys(nd, "nodal", {"lo", "hi", "n", "tol"});
    s.nodal.lo = get_vec2(nd, "nodal", "lo", s.nodal.lo);
    s.nodal.hi = get_vec2(nd, "nodal", "hi", s.nodal.hi);
    s.nodal.n = get_int(nd, "nodal", "n", s.nodal.n);
    s.nodal.tol = get_number(nd, "nodal", "tol", s.nodal.tol);
  }
  if (j.contains("lsm")) {
    const json& l = j.at("lsm");
    check_keys(l, "lsm", {"theta", "h_min", "h_max", "steps", "alpha"});
    s.lsm.theta = get_number(l, "lsm", "theta", s.lsm.theta);
    s.lsm.h_min = get_number(l, "lsm", "h_min", s.lsm.h_min);
    s.lsm.h_max = get_number(l, "lsm", "h_max", s.lsm.h_max);
    s.lsm.steps = get_int(l, "lsm", "steps", s.lsm.steps);
    s.lsm.alpha = get_number(l, "lsm", "alpha", s.lsm.alpha);
  }
  s.source_text = j.dump();
  validate_scene(s);
  return s;
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open scene file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str());
}

void validate_scene(const Scene& s) {
  if (s.incident_cp == 0.0 && s.incident_cs == 0.0) fail("incident", "cp and cs both vanish");
  if (s.directions < 16 || s.directions % 2 != 0) fail("measurement.directions", "must be even and at least 16");
  if (!(s.radius > 0.0)) fail("measurement.radius", "must be positive");
  if (!(obstacle_extent(s.obstacle) < s.radius)) fail("obstacle", "must lie strictly inside the measurement radius");
  if (!(s.noise >= 0.0)) fail("noise.level", "must be nonnegative");
  if (s.truncation != -1 && s.truncation < 1) fail("solver.truncation", "must be positive");
  if (s.mfs.n_sources < 0 || s.mfs.n_collocation < 0) fail("solver", "MFS counts must be nonnegative");
  if (!(s.mfs.svd_cutoff > 0.0 && s.mfs.svd_cutoff < 1.0)) fail("solver.svd_cutoff", "must lie in (0, 1)");
  const auto& im = s.imaging;
  if (!(im.hi.x() > im.lo.x() && im.hi.y() > im.lo.y())) fail("imaging", "hi must exceed lo");
  if (im.grid_n < 2) fail("imaging.grid_n", "must be at least 2");
  if (im.n_theta < 1) fail("imaging.n_theta", "must be positive");
  if (!(im.h_res > 0.0 && im.h_res <= s.radius)) fail("imaging.h_res", "must lie in (0, R]");
  if (!(im.rho >= 0.0 && im.rho < 1.0)) fail("imaging.rho", "must lie in [0, 1)");
  if (im.polarization.norm() == 0.0) fail("imaging.polarization", "must be nonzero");
  if (!(s.nodal.hi.x() > s.nodal.lo.x() && s.nodal.hi.y() > s.nodal.lo.y())) fail("nodal", "hi must exceed lo");
  if (s.nodal.n < 2) fail("nodal.n", "must be at least 2");
  if (!(s.nodal.tol >= 0.0)) fail("nodal.tol", "must be nonnegative");
  if (!(s.lsm.h_min > 0.0 && s.lsm.h_min < s.lsm.h_max && s.lsm.h_max <= 2.0 * s.radius)) {
    fail("lsm", "need 0 < h_min < h_max <= 2R");
  }
  if (s.lsm.steps < 2) fail("lsm.steps", "must be at least 2");
  if (!(s.lsm.alpha > 0.0)) fail("lsm.alpha", "must be positive");
}

}  // namespace elastica
