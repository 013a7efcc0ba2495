#ifndef ELASTICA_TYPES_HPP
#define ELASTICA_TYPES_HPP

#include <complex>

#include <Eigen/Core>

namespace elastica {

using cd = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using CVec2 = Eigen::Vector2cd;
/// 2x2 complex tensor (Green's tensors, mode blocks).
using Tensor2 = Eigen::Matrix2cd;

inline constexpr cd kI{0.0, 1.0};

/// Counterclockwise quarter turn: (a, b) -> (-b, a). Used for d^perp and x^perp.
inline Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

}  // namespace elastica

#endif  // ELASTICA_TYPES_HPP
