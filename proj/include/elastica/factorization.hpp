#ifndef ELASTICA_FACTORIZATION_HPP
#define ELASTICA_FACTORIZATION_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "elastica/farfield.hpp"
#include "elastica/ffop.hpp"
#include "elastica/forward.hpp"
#include "elastica/spectrum_cache.hpp"

namespace elastica {

/// Which eigenpairs enter a truncated Picard series.
struct PicardConfig {
  enum class Rule { Relative, Fixed };
  Rule rule = Rule::Relative;
  double rho = 1e-12;  ///< Relative: keep |eta_n| >= rho |eta_1|
  int n = 0;           ///< Fixed: keep the n largest
  double noise = 0.0;

  static PicardConfig relative(double rho);
  static PicardConfig fixed(int n);
  /// rho = 10 eps for noisy data, 1e-12 without noise.
  static PicardConfig for_noise(double eps);
  /// Throws std::invalid_argument for rho outside (0,1), n outside 1..size or eps < 0.
  void validate(int size) const;
};

struct PicardResult {
  double s = 0.0;
  double w = 0.0;  ///< 1/s; +inf when s == 0, 0 when s overflows
  int retained = 0;
  double tail_increment = 0.0;  ///< (S_N - S_{N-5}) / S_N, the growth over the last five modes
};

/// Throws std::runtime_error when the cutoff leaves no modes.
PicardResult picard_sum(const EigenSystem& es, const Eigen::VectorXcd& psi, const PicardConfig& cfg);

/// Truncated Picard solution sum <phi_n, psi> / sqrt|eta_n| phi_n; its squared norm equals S.
Eigen::VectorXcd picard_solution_g(const EigenSystem& es, const Eigen::VectorXcd& psi, const PicardConfig& cfg);

/// Rectangular sampling grid. Row 0 is the top row (y = hi.y), as in the PGM output.
struct IndicatorGrid {
  Vec2 lo{-1.0, -1.0};
  Vec2 hi{1.0, 1.0};
  int nx = 0;
  int ny = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> mask;  ///< 1 where the value is undefined

  static IndicatorGrid make(const Vec2& lo, const Vec2& hi, int nx, int ny);
  Vec2 point(int row, int col) const;
  std::size_t index(int row, int col) const { return static_cast<std::size_t>(row) * nx + col; }
  double cell_area() const;
};

/// W(y) of the classical full-aperture method with psi = point-source far field of polarization p.
IndicatorGrid classical_indicator(const EigenSystem& es, IndicatorGrid grid, const CVec2& p,
                                  const ElasticMedium& med, const PicardConfig& cfg, unsigned threads = 1);

/// Sampling circle z(theta) = R (cos, sin) with n_theta uniform angles; radii are snapped to h_res.
struct SamplingGeometry {
  double radius = 3.0;
  int n_theta = 64;
  double h_res = 0.01;

  double theta(int j) const;
  Vec2 z(double theta) const;
  /// Nearest positive multiple of h_res.
  double snap(double h) const;
};

struct SingleWaveResult {
  double h = 0.0;  ///< radius actually used
  bool perturbed = false;  ///< h was moved off a Dirichlet eigenvalue
  PicardResult picard;
};

/// Test data of one measured far field projected for one sampling angle; reusable across radii.
class SingleWaveProbe {
 public:
  SingleWaveProbe(const FarFieldPattern& uinf, double theta, const SamplingGeometry& geom, const ElasticMedium& med);
  /// Picard sum against the origin disk spectrum conjugated to z(theta).
  PicardResult evaluate(const DiskSpectrum& ds, const PicardConfig& cfg) const;
  double theta() const { return theta_; }

 private:
  double theta_;
  int m_;
  Eigen::VectorXcd p_hat_;  ///< DFT of the P channel of U* psi
  Eigen::VectorXcd s_hat_;
};

/// W(h, theta). Retries once at h (1 + 1e-3) when the sampling disk hits a Dirichlet eigenvalue.
SingleWaveResult single_wave_W(const FarFieldPattern& uinf, double h, double theta, const SamplingGeometry& geom,
                               SpectrumCache& cache, const PicardConfig& cfg);
SingleWaveResult single_wave_W(const SingleWaveProbe& probe, double h, SpectrumCache& cache,
                               const PicardConfig& cfg);

/// I(y) = [int W(|y - z(theta)|, theta) dtheta]^{-1}; masked theta values are dropped and
/// the trapezoid weights renormalized.
IndicatorGrid indicator_I(const FarFieldPattern& uinf, IndicatorGrid grid, const SamplingGeometry& geom,
                          SpectrumCache& cache, const PicardConfig& cfg, unsigned threads = 1);

struct LsmResult {
  Eigen::VectorXcd g;
  double norm = 0.0;
  double residual = 0.0;  ///< ||A g - u||
};

/// Tikhonov solution (A*A + alpha I)^{-1} A* u. Throws std::invalid_argument for alpha <= 0.
LsmResult lsm_baseline(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& u, double alpha);

struct IndicatorContrast {
  double mean_in = 0.0;
  double mean_out = 0.0;
  double ratio = 0.0;
  int cells_in = 0;
  int cells_out = 0;
};

/// Mean of unmasked values inside vs outside the obstacle.
IndicatorContrast indicator_contrast(const IndicatorGrid& grid, const Obstacle& ob);
/// Area of {value >= level * max} symmetric-difference the obstacle, relative to the obstacle area.
double level_set_mismatch(const IndicatorGrid& grid, const Obstacle& ob, double level, double obstacle_area);

}  // namespace elastica

#endif  // ELASTICA_FACTORIZATION_HPP
