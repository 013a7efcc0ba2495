#ifndef ELASTICA_FFOP_HPP
#define ELASTICA_FFOP_HPP

#include <vector>

#include <Eigen/Core>

#include "elastica/farfield.hpp"
#include "elastica/field.hpp"
#include "elastica/forward.hpp"
#include "elastica/medium.hpp"

namespace elastica {

/**
 * Discretized far-field operator on M uniform directions.
 *
 * Entries are flux weighted: a[(m,a),(m',b)] = sqrt(w_m w_m') k_a^{-1/2} u_a(x_m; b-wave from d_m') k_b,
 * with blocks ordered (all P directions, then all S directions). In this basis the
 * operator of a rigid scatterer is normal; the unscaled matrix is not when kp != ks.
 */
struct FarFieldOperator {
  std::vector<Vec2> directions;
  std::vector<double> weights;
  Eigen::MatrixXcd a;
  double normality_defect = 0.0;

  int m() const { return static_cast<int>(directions.size()); }
};

enum class SpectrumProvenance { Numeric, DiskModal, Translated };

/// Eigenpairs sorted by decreasing |eta|; columns of `vectors` are orthonormal.
struct EigenSystem {
  int m = 0;
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;
  SpectrumProvenance provenance = SpectrumProvenance::Numeric;
  double residual = 0.0;  ///< max ||A phi - eta phi|| / max|eta| over the pairs

  int size() const { return static_cast<int>(values.size()); }
};

/// ||A A* - A* A||_F / ||A||_F^2.
double normality_defect(const Eigen::MatrixXcd& a);

/// Flux-weighted test vector sqrt(w_m) psi_a(x_m) / sqrt(k_a), stacked (P block, S block).
Eigen::VectorXcd flux_vector(const FarFieldPattern& ff, const ElasticMedium& med);

/// Forward solves for pure P and pure S incidence at every direction. Disks use the
/// mode series; polygons one shared MFS factorization. M must be even and >= 16.
FarFieldOperator assemble_F(const Obstacle& ob, const ElasticMedium& med, int m, unsigned threads = 1,
                            MfsParams mfs = {});

/**
 * Schur-based eigendecomposition for near-normal matrices.
 *
 * Throws std::runtime_error when the normality defect exceeds 1e-6, or when an eigenpair
 * residual exceeds residual_tol * max|eta|. The default tolerance is meant for data with
 * near machine accuracy; MFS-generated operators need a looser one.
 */
EigenSystem eigensystem(const Eigen::MatrixXcd& a, double residual_tol = 1e-8);
EigenSystem eigensystem(const FarFieldOperator& op, double residual_tol = 1e-8);

/// Sum of eta_n phi_n phi_n^*.
Eigen::MatrixXcd reconstruct(const EigenSystem& es);

/**
 * Compact spectrum of an origin-centered disk: mode k (0..M-1) carries a 2x2 normal
 * block 2 pi sum_{n = k mod M} Q~_n with Schur vectors `vecs[k]` and eigenvalues `vals[k]`.
 * The full eigenvector for (k, j) is e^{i k phi_m} / sqrt(M) vecs[k].col(j).
 */
struct DiskSpectrum {
  double radius = 0.0;
  int m = 0;
  std::vector<Eigen::Matrix2cd> vecs;
  std::vector<Eigen::Vector2cd> vals;
  /// (k, j) pairs sorted by decreasing |eta|.
  std::vector<std::pair<int, int>> order;

  EigenSystem expand() const;
};

/// Throws ModeSingularityError when the disk is close to a Dirichlet eigenvalue.
DiskSpectrum disk_modal_spectrum(double h, const ElasticMedium& med, int m);
EigenSystem disk_spectrum_fast(double h, const ElasticMedium& med, int m);

/// Spectrum of the disk moved to z: eigenvector entries (m, a) pick up e^{-i k_a x_m . z}.
EigenSystem conjugate_spectrum_translate(const EigenSystem& es, const Vec2& z, const ElasticMedium& med);

/// Herglotz wave for a physical density g = (g_p(d_m), g_s(d_m)) stacked, trapezoid weights 2 pi / M.
CVec2 herglotz_eval(const Eigen::VectorXcd& g, const ElasticMedium& med, const Vec2& x);
VectorField herglotz_field(const Eigen::VectorXcd& g, const ElasticMedium& med);

}  // namespace elastica

#endif  // ELASTICA_FFOP_HPP
