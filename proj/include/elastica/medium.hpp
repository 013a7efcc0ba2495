#ifndef ELASTICA_MEDIUM_HPP
#define ELASTICA_MEDIUM_HPP

namespace elastica {

/// Isotropic homogeneous medium with unit density.
struct ElasticMedium {
  double lambda = 0.0;
  double mu = 0.0;
  double omega = 0.0;
  double kp = 0.0;      ///< compressional wavenumber omega / sqrt(lambda + 2 mu)
  double ks = 0.0;      ///< shear wavenumber omega / sqrt(mu)
  double c_refl = 0.0;  ///< (lambda + mu) / (lambda + 3 mu), the Lame reflection constant

  double wavenumber(int channel) const { return channel == 0 ? kp : ks; }
};

/// Validates the Lame constants and frequency and fills the derived fields.
/// Throws std::invalid_argument when mu <= 0, lambda + 2 mu <= 0, omega <= 0
/// or lambda + 3 mu == 0.
ElasticMedium make_medium(double lambda, double mu, double omega);

}  // namespace elastica

#endif  // ELASTICA_MEDIUM_HPP
