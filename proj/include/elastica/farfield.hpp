#ifndef ELASTICA_FARFIELD_HPP
#define ELASTICA_FARFIELD_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "elastica/types.hpp"

namespace elastica {

/// p- and s-components of a far field sampled on M uniform directions.
/// The full far field is up * xhat + us * xhat_perp.
struct FarFieldPattern {
  std::vector<Vec2> directions;
  std::vector<double> weights;
  Eigen::VectorXcd up;
  Eigen::VectorXcd us;

  int size() const { return static_cast<int>(directions.size()); }
  /// Flattened (p block, s block) vector of length 2M.
  Eigen::VectorXcd stacked() const;
  /// Sum of w_m (|up|^2 + |us|^2), square-rooted.
  double l2_norm() const;
};

/// Angles 2 pi m / M for m = 0..M-1.
std::vector<Vec2> uniform_directions(int m);
/// Empty pattern on M uniform directions with trapezoid weights 2 pi / M.
FarFieldPattern make_pattern(int m);

/// Relative weighted L2 distance ||a - b|| / ||b||. Direction grids must agree.
double relative_l2(const FarFieldPattern& a, const FarFieldPattern& b);

/// CSV with header m,dirx,diry,re_up,im_up,re_us,im_us at 17 significant digits.
void write_farfield_csv(std::ostream& os, const FarFieldPattern& ff);
void write_farfield_csv(const std::string& path, const FarFieldPattern& ff);
/// Reads a pattern written by write_farfield_csv; weights are reset to 2 pi / M.
FarFieldPattern read_farfield_csv(const std::string& path);

}  // namespace elastica

#endif  // ELASTICA_FARFIELD_HPP
