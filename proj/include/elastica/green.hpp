#ifndef ELASTICA_GREEN_HPP
#define ELASTICA_GREEN_HPP

#include <array>
#include <vector>

#include "elastica/farfield.hpp"
#include "elastica/field.hpp"
#include "elastica/medium.hpp"
#include "elastica/types.hpp"

namespace elastica {

/// A 2x2 tensor kernel K(x, y) differentiated in x: column j as a vector-field jet.
using TensorJet = std::array<FieldJet, 2>;

Tensor2 jet_value(const TensorJet& t);

/// Kelvin (free-plane Lame) tensor. Throws std::domain_error when |x - y| < 1e-13.
Tensor2 kelvin_phi0(const Vec2& x, const Vec2& y, const ElasticMedium& med);
TensorJet kelvin_phi0_jet(const Vec2& x, const Vec2& y, const ElasticMedium& med);

/// Radiating Navier tensor
/// (i/4mu) H0(ks r) I + (i/4 omega^2) grad grad^T [H0(ks r) - H0(kp r)].
Tensor2 navier_phiomega(const Vec2& x, const Vec2& y, const ElasticMedium& med);
TensorJet navier_phiomega_jet(const Vec2& x, const Vec2& y, const ElasticMedium& med);

/**
 * Dirichlet Green's tensor of the Lame operator in {x1 > 0}:
 * Phi0(x, y) plus the Duffin image of Phi0(., y) evaluated at the mirror point.
 *
 * Columns solve the Lame equation in x and vanish on x1 = 0. Requires y1 > 0;
 * throws std::invalid_argument otherwise and std::domain_error at either pole.
 */
Tensor2 halfplane_g0(const Vec2& x, const Vec2& y, const ElasticMedium& med);
TensorJet halfplane_g0_jet(const Vec2& x, const Vec2& y, const ElasticMedium& med);

/// The image part G0 - Phi0 alone, with no check on the side of y. Singular at x = Ry.
Tensor2 halfplane_image(const Vec2& x, const Vec2& y, const ElasticMedium& med);

/// The image part split into its 1/r^2 term about y = Rx (zero angular mean)
/// and the remaining weakly singular term. hyper + rest == halfplane_image.
struct ImageSplit {
  Eigen::Matrix2d hyper;
  Eigen::Matrix2d rest;
};
ImageSplit halfplane_image_split(const Vec2& x, const Vec2& y, const ElasticMedium& med);

/// Far field of x -> Phi_omega(x, y) P on the given directions (uniform weights assumed).
FarFieldPattern farfield_point_source(const Vec2& y, const CVec2& p, const ElasticMedium& med,
                                      const std::vector<Vec2>& directions);

/// Per-direction amplitudes of the same far field: {p-part, s-part}.
std::array<cd, 2> point_source_amplitudes(const Vec2& y, const CVec2& p, const ElasticMedium& med,
                                          const Vec2& xhat);

}  // namespace elastica

#endif  // ELASTICA_GREEN_HPP
