#ifndef ELASTICA_FORWARD_HPP
#define ELASTICA_FORWARD_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "elastica/farfield.hpp"
#include "elastica/field.hpp"
#include "elastica/medium.hpp"
#include "elastica/types.hpp"

namespace elastica {

struct DiskObstacle {
  Vec2 center = Vec2::Zero();
  double radius = 1.0;
};

/// Simple counterclockwise polygon. Build through make_polygon to get validation.
struct PolygonObstacle {
  std::vector<Vec2> vertices;
};

using Obstacle = std::variant<DiskObstacle, PolygonObstacle>;

DiskObstacle make_disk(const Vec2& center, double radius);
/// Throws std::invalid_argument for fewer than 3 vertices, clockwise order or self-intersection.
PolygonObstacle make_polygon(std::vector<Vec2> vertices);

bool obstacle_contains(const Obstacle& ob, const Vec2& x);
double boundary_distance(const Obstacle& ob, const Vec2& x);
/// Largest |x| over the obstacle.
double obstacle_extent(const Obstacle& ob);
/// Point at arclength fraction t in [0, 1) along the boundary, counterclockwise.
Vec2 boundary_point(const Obstacle& ob, double t);

/// A disk mode whose Bessel (interior) system is nearly singular, i.e. omega^2 sits
/// close to a Dirichlet eigenvalue of the disk.
class ModeSingularityError : public std::runtime_error {
 public:
  ModeSingularityError(int mode, double cond);
  int mode() const { return mode_; }
  double condition() const { return cond_; }

 private:
  int mode_;
  double cond_;
};

/// Condition numbers above this flag a mode as singular.
inline constexpr double kModeCondLimit = 1e10;

enum class Representation { DiskSeries, Mfs };

/**
 * Solved rigid scattering problem. Immutable after construction.
 *
 * DiskSeries: coeffs = (a_{-N..N}, b_{-N..N}) for the P and S potentials around the
 * disk center. Mfs: coeffs = (c_j) stacked per source, two entries each.
 */
struct ScatterSolution {
  Obstacle obstacle;
  PlaneWave incident;
  ElasticMedium medium;
  Representation rep = Representation::DiskSeries;
  Eigen::VectorXcd coeffs;
  int truncation = 0;
  std::vector<Vec2> sources;
  double residual = 0.0;     ///< max |u_total| over validation boundary points
  int validation_points = 0;
  std::string warning;       ///< non-fatal diagnostics, empty when clean
};

/// Defaults follow the disk mode truncation rule ceil(ks h) + 25.
int default_truncation(double radius, const ElasticMedium& med);

/// Separation of variables for a disk. truncation < 0 selects default_truncation.
/// Throws std::invalid_argument when truncation < ks h + 10.
ScatterSolution disk_series_solve(const DiskObstacle& disk, const PlaneWave& pw, const ElasticMedium& med,
                                  int truncation = -1);

/**
 * 2x2 Fourier symbol of the far-field kernel of an origin-centered disk.
 *
 * For a density g(d) = e^{in theta_d} v on the incident directions, the far field is
 * 2 pi Q_n v e^{in phi}; rows and columns are ordered (P, S). Throws ModeSingularityError
 * for propagating modes with an ill-conditioned interior system.
 */
Tensor2 disk_mode_symbol(double radius, const ElasticMedium& med, int n);
/// Q_n for n = -nmax..nmax (index n + nmax), sharing one set of Bessel tables.
std::vector<Tensor2> disk_mode_symbols(double radius, const ElasticMedium& med, int nmax);

/// ScaledCopy puts sources on the boundary shrunk about its centroid. Graded clusters
/// collocation points toward polygon corners (s = t^q / (t^q + (1-t)^q) per edge) and
/// offsets each source inward by offset_factor local spacings. Auto: disks use
/// ScaledCopy, polygons Graded.
enum class MfsLayout { Auto, ScaledCopy, Graded };

struct MfsParams {
  int n_sources = 0;            ///< 0: 120 for disks, 300 for polygons
  int n_collocation = 0;        ///< 0: twice n_sources
  double retraction = 0.0;      ///< ScaledCopy factor; 0: 0.8 for disks, 0.7 for polygons
  double svd_cutoff = 1e-12;    ///< relative to the largest singular value
  double warn_residual = 1e-4;
  MfsLayout layout = MfsLayout::Auto;
  double grading = 5.0;
  double offset_factor = 2.0;
};

ScatterSolution mfs_solve(const Obstacle& ob, const PlaneWave& pw, const ElasticMedium& med,
                          MfsParams params = {});
/// Several incident waves against one factorization of the collocation matrix.
std::vector<ScatterSolution> mfs_solve_many(const Obstacle& ob, const std::vector<PlaneWave>& waves,
                                            const ElasticMedium& med, MfsParams params = {}, unsigned threads = 1);

CVec2 scattered_value(const ScatterSolution& sol, const Vec2& x);
CVec2 total_value(const ScatterSolution& sol, const Vec2& x);
/// Scattered field as a sampled VectorField (FD derivatives with the given step).
VectorField scattered_field(const ScatterSolution& sol, double step = 1e-3);

FarFieldPattern farfield_of_solution(const ScatterSolution& sol, const std::vector<Vec2>& directions,
                                     unsigned threads = 1);

/// Far fields for unit-amplitude pure P and pure S incidence along the same direction.
struct ChannelPatterns {
  FarFieldPattern p;
  FarFieldPattern s;
};

/// Moves the scatterer by z. pw must be a pure channel (exactly one of cp, cs nonzero);
/// mixed waves throw std::invalid_argument and go through the ChannelPatterns overload.
FarFieldPattern translate_farfield(const FarFieldPattern& ff, const Vec2& z, const ElasticMedium& med,
                                   const PlaneWave& pw);
FarFieldPattern translate_farfield(const ChannelPatterns& ff, const Vec2& z, const ElasticMedium& med,
                                   const PlaneWave& pw);

struct NodalGrid {
  Vec2 lo{-2.0, -2.0};
  Vec2 hi{2.0, 2.0};
  int n = 200;
};

struct NodalSegment {
  Vec2 a;
  Vec2 b;
  int points = 0;
  bool endpoints_on_boundary = false;
};

struct NodalScanResult {
  std::vector<Vec2> points;
  std::vector<NodalSegment> segments;
  int scanned = 0;
  double min_abs = 0.0;    ///< smallest |u| seen on the grid
  bool violation = false;  ///< a segment joins two boundary points
};

/// Grid points outside the obstacle with |u_total| < tol, and collinear runs among them
/// (gap threshold two cells). tol_geom <= 0 uses two cell widths.
NodalScanResult nodal_scan(const ScatterSolution& sol, const NodalGrid& grid, double tol,
                           double tol_geom = 0.0, unsigned threads = 1);

}  // namespace elastica

#endif  // ELASTICA_FORWARD_HPP
