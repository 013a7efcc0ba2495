#include "elastica/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>

#include "elastica/grid_io.hpp"
#include "elastica/manifest.hpp"
#include "elastica/parallel.hpp"
#include "elastica/reflection.hpp"
#include "elastica/spectrum_cache.hpp"

namespace elastica {

namespace {

using nlohmann::json;

// A failed numerical gate; reported with exit code 1.
class GateFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_csv(const std::filesystem::path& p, const char* header) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << header << '\n';
  return out;
}

std::string data_solver(const Scene& s) {
  return std::holds_alternative<DiskObstacle>(s.obstacle) ? "disk mode series" : "method of fundamental solutions";
}

struct Context {
  const RunOptions& opts;
  Scene scene;
  unsigned threads;
  RunManifest manifest;
  std::ostream& log;
};

std::optional<std::filesystem::path> cache_dir(const RunOptions& o) {
  if (o.cache_dir) return o.cache_dir;
  return SpectrumCache::dir_from_env();
}

void record_cache(Context& c, const SpectrumCache& cache) {
  const auto st = cache.stats();
  c.manifest["cache"] = {{"enabled", cache.enabled()},
                         {"memory_hits", st.memory_hits},
                         {"disk_hits", st.disk_hits},
                         {"misses", st.misses},
                         {"writes", st.writes}};
}

void record_indicator(Context& c, const IndicatorGrid& grid, const std::string& base) {
  const auto files = write_grid(grid, c.opts.out / base);
  c.manifest.add_output(files.csv);
  c.manifest.add_output(files.pgm);
  c.manifest.add_output(files.sidecar);
  const auto ct = indicator_contrast(grid, c.scene.obstacle);
  const auto masked = std::count(grid.mask.begin(), grid.mask.end(), std::uint8_t{1});
  c.manifest["metrics"] = {{"contrast", ct.ratio},
                           {"mean_in", ct.mean_in},
                           {"mean_out", ct.mean_out},
                           {"cells_in", ct.cells_in},
                           {"cells_out", ct.cells_out},
                           {"masked_cells", masked},
                           {"level_set_mismatch_50", level_set_mismatch(grid, c.scene.obstacle, 0.5,
                                                                        obstacle_area(c.scene.obstacle))}};
  c.log << base << ": contrast " << ct.ratio << " (" << ct.cells_in << " cells inside)\n";
  if (masked == static_cast<long>(grid.mask.size())) throw GateFailure("every indicator cell is masked");
}

IndicatorGrid scene_grid(const Scene& s) {
  return IndicatorGrid::make(s.imaging.lo, s.imaging.hi, s.imaging.grid_n, s.imaging.grid_n);
}

void record_data(Context& c, const MeasuredData& d) {
  c.manifest["data"] = {{"solver", data_solver(c.scene)},
                        {"boundary_residual", d.solution.residual},
                        {"noise_level", c.scene.noise},
                        {"seed", c.scene.seed},
                        {"relative_perturbation", d.noisy.relative_perturbation}};
  if (!d.solution.warning.empty()) c.manifest["data"]["warning"] = d.solution.warning;
  if (!(d.solution.residual < kForwardGate)) {
    throw GateFailure("forward boundary residual " + fmt17(d.solution.residual) + " exceeds the gate");
  }
}

void cmd_forward(Context& c) {
  StageTimer t;
  const auto d = measure_scene(c.scene, c.threads);
  c.manifest.add_timing("forward", t.seconds());
  const auto path = c.opts.out / "farfield.csv";
  write_farfield_csv(path.string(), d.noisy.pattern);
  c.manifest.add_output(path);
  if (c.scene.noise > 0.0) {
    const auto clean = c.opts.out / "farfield_clean.csv";
    write_farfield_csv(clean.string(), d.clean);
    c.manifest.add_output(clean);
  }
  c.log << "forward: boundary residual " << d.solution.residual << '\n';
  record_data(c, d);
}

double operator_tolerance(const Scene& s) { return std::holds_alternative<DiskObstacle>(s.obstacle) ? 1e-8 : 1e-4; }

EigenSystem scene_eigensystem(Context& c) {
  StageTimer t;
  const auto op = assemble_F(c.scene.obstacle, c.scene.medium, c.scene.directions, c.threads, c.scene.mfs);
  c.manifest.add_timing("assemble", t.seconds());
  c.manifest["operator"] = {{"normality_defect", op.normality_defect}, {"m", op.m()}, {"solver", data_solver(c.scene)}};
  StageTimer te;
  EigenSystem es;
  try {
    es = eigensystem(op, operator_tolerance(c.scene));
  } catch (const std::runtime_error& e) {
    throw GateFailure(e.what());
  }
  c.manifest.add_timing("eigensystem", te.seconds());
  c.manifest["operator"]["eigen_residual"] = es.residual;
  return es;
}

void cmd_spectrum(Context& c) {
  const auto es = scene_eigensystem(c);
  const auto path = c.opts.out / "eigenvalues.csv";
  {
    auto out = open_csv(path, "n,re,im,abs");
    for (int i = 0; i < es.size(); ++i) {
      out << i << ',' << fmt17(es.values[i].real()) << ',' << fmt17(es.values[i].imag()) << ','
          << fmt17(std::abs(es.values[i])) << '\n';
    }
  }
  c.manifest.add_output(path);
  const auto dir = cache_dir(c.opts);
  if (dir && !c.opts.no_cache) {
    // Populate sampling-disk spectra for every snapped radius in (0, 2R].
    StageTimer t;
    SpectrumCache cache(c.scene.medium, c.scene.directions, dir);
    const auto geom = c.scene.sampling();
    const int count = static_cast<int>(std::floor(2.0 * geom.radius / geom.h_res + 1e-9));
    int failed = 0;
    for (int j = 1; j <= count; ++j) {
      try {
        cache.get(j * geom.h_res);
      } catch (const ModeSingularityError&) {
        ++failed;
      }
    }
    c.manifest.add_timing("cache_populate", t.seconds());
    record_cache(c, cache);
    c.manifest["cache"]["singular_radii"] = failed;
    c.log << "spectrum: cached " << count - failed << " sampling-disk spectra in " << dir->string() << '\n';
  }
  c.log << "spectrum: normality defect " << c.manifest["operator"]["normality_defect"].get<double>() << '\n';
}

void cmd_fm_classic(Context& c) {
  if (c.scene.noise > 0.0) {
    throw GateFailure("fm-classic needs a normal operator; noisy full-aperture data is not supported");
  }
  const auto es = scene_eigensystem(c);
  StageTimer t;
  const auto grid = classical_indicator(es, scene_grid(c.scene), c.scene.imaging.polarization, c.scene.medium,
                                        c.scene.picard(), c.threads);
  c.manifest.add_timing("indicator", t.seconds());
  c.manifest["inverse_crime"] = {{"data", data_solver(c.scene)}, {"test_functions", "analytic point-source far fields"}};
  record_indicator(c, grid, "indicator");
}

void cmd_fm_single(Context& c) {
  StageTimer t;
  const auto d = measure_scene(c.scene, c.threads);
  c.manifest.add_timing("forward", t.seconds());
  record_data(c, d);
  SpectrumCache cache(c.scene.medium, c.scene.directions, cache_dir(c.opts), !c.opts.no_cache);
  StageTimer ti;
  const auto grid =
      indicator_I(d.noisy.pattern, scene_grid(c.scene), c.scene.sampling(), cache, c.scene.picard(), c.threads);
  c.manifest.add_timing("indicator", ti.seconds());
  record_cache(c, cache);
  c.manifest["inverse_crime"] = {{"data", data_solver(c.scene)},
                                 {"inversion", "modal spectra of origin disks, translated"}};
  record_indicator(c, grid, "indicator");
}

void cmd_reflect_check(Context& c) {
  struct Gate {
    ReflectionFamily family;
    const char* name;
    int probes;
    double tol;
  };
  const Gate gates[] = {{ReflectionFamily::Lame, "lame", 50, 1e-8},
                        {ReflectionFamily::Navier, "navier", 20, 5e-4},
                        {ReflectionFamily::HelmholtzBC, "helmholtz", 50, 1e-8}};
  json report = json::object();
  bool ok = true;
  for (const auto& g : gates) {
    StageTimer t;
    const auto r = verify_reflection(g.family, g.probes, c.scene.seed, c.scene.medium, c.threads);
    c.manifest.add_timing(g.name, t.seconds());
    report[g.name] = json::parse(r.to_json());
    report[g.name]["tolerance"] = g.tol;
    report[g.name]["pass"] = r.max_error < g.tol;
    ok = ok && r.max_error < g.tol;
    c.log << "reflect-check " << g.name << ": max error " << r.max_error << " (tolerance " << g.tol << ")\n";
  }
  const auto path = c.opts.out / "reflect_report.json";
  {
    std::ofstream out(path);
    out << report.dump(2) << '\n';
  }
  c.manifest.add_output(path);
  if (!ok) throw GateFailure("a reflection identity exceeds its tolerance");
}

void cmd_nodal_scan(Context& c) {
  StageTimer t;
  const auto d = measure_scene(c.scene, c.threads);
  record_data(c, d);
  NodalGrid g;
  g.lo = c.scene.nodal.lo;
  g.hi = c.scene.nodal.hi;
  g.n = c.scene.nodal.n;
  const auto r = nodal_scan(d.solution, g, c.scene.nodal.tol, 0.0, c.threads);
  c.manifest.add_timing("scan", t.seconds());
  const auto pts = c.opts.out / "nodal.csv";
  {
    auto out = open_csv(pts, "x,y");
    for (const auto& p : r.points) out << fmt17(p.x()) << ',' << fmt17(p.y()) << '\n';
  }
  json segs = json::array();
  for (const auto& s : r.segments) {
    segs.push_back({{"a", {s.a.x(), s.a.y()}},
                    {"b", {s.b.x(), s.b.y()}},
                    {"points", s.points},
                    {"endpoints_on_boundary", s.endpoints_on_boundary}});
  }
  const json report = {{"scanned", r.scanned}, {"near_zero_points", r.points.size()}, {"min_abs", r.min_abs},
                       {"tol", c.scene.nodal.tol}, {"segments", segs},          {"violation", r.violation}};
  const auto rep = c.opts.out / "nodal_report.json";
  {
    std::ofstream out(rep);
    out << report.dump(2) << '\n';
  }
  c.manifest.add_output(pts);
  c.manifest.add_output(rep);
  c.manifest["metrics"] = {{"segments", r.segments.size()}, {"violation", r.violation}};
  c.log << "nodal-scan: " << r.points.size() << " near-zero points, " << r.segments.size() << " segments\n";
  if (r.violation) throw GateFailure("a nodal segment joins two boundary points");
}

void cmd_lsm_compare(Context& c) {
  StageTimer t;
  const auto d = measure_scene(c.scene, c.threads);
  record_data(c, d);
  const auto& s = c.scene;
  const auto geom = s.sampling();
  SpectrumCache cache(s.medium, s.directions, cache_dir(c.opts), !c.opts.no_cache);
  const SingleWaveProbe probe(d.noisy.pattern, s.lsm.theta, geom, s.medium);
  const Eigen::VectorXcd u = flux_vector(d.noisy.pattern, s.medium);
  const Vec2 z = geom.z(s.lsm.theta);
  const auto path = c.opts.out / "lsm.csv";
  {
    auto out = open_csv(path, "h,picard_s,picard_w,retained,perturbed,lsm_norm,lsm_residual");
    for (int i = 0; i < s.lsm.steps; ++i) {
      const double h = geom.snap(s.lsm.h_min + (s.lsm.h_max - s.lsm.h_min) * i / (s.lsm.steps - 1));
      const auto w = single_wave_W(probe, h, cache, s.picard());
      const auto ds = cache.get(w.h);
      const Eigen::MatrixXcd a = reconstruct(conjugate_spectrum_translate(ds->expand(), z, s.medium));
      const auto l = lsm_baseline(a, u, s.lsm.alpha);
      out << fmt17(w.h) << ',' << fmt17(w.picard.s) << ',' << fmt17(w.picard.w) << ',' << w.picard.retained << ','
          << int(w.perturbed) << ',' << fmt17(l.norm) << ',' << fmt17(l.residual) << '\n';
    }
  }
  c.manifest.add_timing("sweep", t.seconds());
  record_cache(c, cache);
  c.manifest.add_output(path);
  c.log << "lsm-compare: " << s.lsm.steps << " radii written\n";
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"forward",       "spectrum",   "fm-classic",  "fm-single",
                                                 "reflect-check", "nodal-scan", "lsm-compare"};
  return names;
}

double obstacle_area(const Obstacle& ob) {
  if (const auto* d = std::get_if<DiskObstacle>(&ob)) return std::numbers::pi * d->radius * d->radius;
  const auto& v = std::get<PolygonObstacle>(ob).vertices;
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& p = v[i];
    const Vec2& q = v[(i + 1) % v.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

MeasuredData measure_scene(const Scene& scene, unsigned threads) {
  MeasuredData d;
  const PlaneWave pw = scene.incident();
  if (const auto* disk = std::get_if<DiskObstacle>(&scene.obstacle)) {
    d.solution = disk_series_solve(*disk, pw, scene.medium, scene.truncation);
  } else {
    d.solution = mfs_solve(scene.obstacle, pw, scene.medium, scene.mfs);
  }
  d.clean = farfield_of_solution(d.solution, uniform_directions(scene.directions), threads);
  d.noisy = inject_noise(d.clean, scene.noise, scene.seed);
  return d;
}

int run_command(const RunOptions& opts, std::ostream& log) {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), opts.command) == names.end()) {
    log << "error: unknown command '" << opts.command << "'\n";
    return kExitUsage;
  }
  Scene scene;
  try {
    scene = load_scene(opts.config);
    if (opts.seed) scene.seed = *opts.seed;
    if (opts.noise) scene.noise = *opts.noise;
    if (opts.rho) scene.imaging.rho = *opts.rho;
    if (opts.grid_n) scene.imaging.grid_n = *opts.grid_n;
    if (opts.n_theta) scene.imaging.n_theta = *opts.n_theta;
    validate_scene(scene);
    scene.picard().validate(2 * scene.directions);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    log << "config error: " << e.what() << '\n';
    return kExitUsage;
  }

  json effective = json::parse(scene.source_text);
  effective["noise"]["level"] = scene.noise;
  effective["noise"]["seed"] = scene.seed;
  effective["imaging"]["grid_n"] = scene.imaging.grid_n;
  effective["imaging"]["n_theta"] = scene.imaging.n_theta;
  effective["imaging"]["rho"] = scene.picard().rho;
  Context c{opts, scene, opts.threads == 0 ? default_threads() : opts.threads,
            RunManifest(opts.command, effective.dump()), log};
  c.manifest["threads"] = c.threads;
  c.manifest["seed"] = scene.seed;

  int code = kExitOk;
  try {
    std::filesystem::create_directories(opts.out);
    StageTimer total;
    if (opts.command == "forward") cmd_forward(c);
    else if (opts.command == "spectrum") cmd_spectrum(c);
    else if (opts.command == "fm-classic") cmd_fm_classic(c);
    else if (opts.command == "fm-single") cmd_fm_single(c);
    else if (opts.command == "reflect-check") cmd_reflect_check(c);
    else if (opts.command == "nodal-scan") cmd_nodal_scan(c);
    else cmd_lsm_compare(c);
    c.manifest.add_timing("total", total.seconds());
  } catch (const GateFailure& e) {
    log << "gate failure: " << e.what() << '\n';
    c.manifest["gate_failure"] = e.what();
    code = kExitGate;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    c.manifest["error"] = e.what();
    code = kExitGate;
  }
  c.manifest["exit_code"] = code;
  try {
    c.manifest.write(opts.out / "manifest.json");
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitGate;
  }
  return code;
}

}  // namespace elastica
