#ifndef ELASTICA_BESSEL_HPP
#define ELASTICA_BESSEL_HPP

#include <complex>
#include <span>

namespace elastica::special {

/// Selects the cylinder function: Bessel J, Neumann Y, or Hankel H^{(1)} = J + iY.
enum class CylKind { J, Y, H1 };

/// Largest integer order accepted by the scalar entry points.
inline constexpr int kMaxOrder = 64;

/**
 * Cylinder function of integer order n >= 0 at a positive real argument.
 *
 * Negative orders are left to the caller: C_{-n} = (-1)^n C_n.
 * Throws std::domain_error for x <= 0 and std::out_of_range for n outside 0..kMaxOrder.
 */
std::complex<double> cyl(CylKind kind, int n, double x);

/// d/dx of cyl(kind, n, ·) via C_n' = C_{n-1} - (n/x) C_n and C_0' = -C_1.
std::complex<double> cyl_deriv(CylKind kind, int n, double x);

/**
 * Fills j[0..nmax] and y[0..nmax] with J_n(x) and Y_n(x) in one sweep.
 *
 * Both spans must hold at least nmax + 1 entries. Y_n overflows to -inf for large
 * n at small x; J_n underflows to zero. This is the workhorse behind cyl() and the
 * disk mode solvers, which need every order at once.
 */
void bessel_jy(int nmax, double x, std::span<double> j, std::span<double> y);

}  // namespace elastica::special

#endif  // ELASTICA_BESSEL_HPP
