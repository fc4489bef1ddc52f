// Radial sector on disc and annulus: Bessel evaluations of real order,
// quantized kappa roots of the boundary conditions, and the energy table
// E(alpha, q) = kappa^2.
//
// Evaluation delegates to the C++17 special functions; half-integer closed
// forms, the Wronskian identity, and the three-term recurrence serve as
// independent oracles in the test tree.  Supported range is documented as
// x <= 200 (far beyond any desk-scale mode used here).
#ifndef PTRING_BESSEL_HPP
#define PTRING_BESSEL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace ptring {

inline constexpr double bessel_x_ceiling = 200.0;

inline double bessel_j(double alpha, double x) {
  if (!(alpha >= 0) || !std::isfinite(alpha)) throw std::invalid_argument("bessel_j needs alpha >= 0");
  if (!(x >= 0) || x > bessel_x_ceiling)
    throw std::invalid_argument("bessel_j argument outside supported range [0, 200]");
  return std::cyl_bessel_j(alpha, x);
}

inline double bessel_y(double alpha, double x) {
  if (!(alpha >= 0) || !std::isfinite(alpha)) throw std::invalid_argument("bessel_y needs alpha >= 0");
  if (!(x > 0) || x > bessel_x_ceiling)
    throw std::invalid_argument("bessel_y argument outside supported range (0, 200]");
  return std::cyl_neumann(alpha, x);
}

template <class Real = double>
struct Geometry {
  Real a_ratio = 0;  // a_inner / a_outer; 0 selects the disc
  Real a_outer = 1;
};

template <class Real = double>
struct RadialMode {
  Real alpha = 0;
  int q = 1;
  Real kappa = 0;  // in units 1/a_outer
  Real energy = 0; // kappa^2
  Geometry<Real> geometry;
};

namespace detail {

// Scans f for sign changes in pi/2 steps (boundary-condition roots are
// asymptotically at least pi apart, so one stride cannot straddle two) and
// bisects each bracket to 1e-8 relative width.  Grid values that are exactly
// zero carry no sign information (underflow at small x for large alpha) and
// keep the previous sign.
template <class F>
std::vector<double> sign_scan_roots(F&& f, double lo, int sign_lo, int count) {
  const double stride = std::asin(1.0); // pi/2
  std::vector<double> roots;
  double x_prev = lo;
  int s_prev = sign_lo;
  for (double x = lo + stride; roots.size() < size_t(count); x += stride) {
    if (x > bessel_x_ceiling)
      throw std::runtime_error("range ceiling exceeded before requested roots found");
    const double fx = f(x);
    const int s = fx > 0 ? 1 : fx < 0 ? -1 : 0;
    if (s != 0 && s_prev != 0 && s != s_prev) {
      double a = x_prev, b = x;
      while (b - a > 1e-8 * b) {
        const double m = (a + b) / 2;
        const double fm = f(m);
        const int sm = fm > 0 ? 1 : fm < 0 ? -1 : 0;
        if (sm == 0) { a = b = m; break; }
        if (sm == s_prev) a = m; else b = m;
      }
      roots.push_back((a + b) / 2);
    }
    if (s != 0) s_prev = s;
    x_prev = x;
  }
  return roots;
}

} // namespace detail

// First `count` positive zeros of J_alpha, ascending (disc quantization).
inline std::vector<double> disc_zeros(double alpha, int count) {
  if (count < 1) throw std::invalid_argument("disc_zeros needs count >= 1");
  if (!(alpha >= 0) || !std::isfinite(alpha)) throw std::invalid_argument("disc_zeros needs alpha >= 0");
  // J_alpha > 0 on (0, first zero); start just right of the origin with the
  // sign fixed analytically, since the value itself may underflow there.
  return detail::sign_scan_roots([&](double x) { return bessel_j(alpha, x); }, 1e-6, 1, count);
}

// First `count` positive roots of the two-point boundary condition
// J_a(r x) Y_a(x) - J_a(x) Y_a(r x) = 0 in x = kappa a_outer units.
inline std::vector<double> annulus_zeros(double alpha, double a_ratio, int count) {
  if (count < 1) throw std::invalid_argument("annulus_zeros needs count >= 1");
  if (!(alpha >= 0) || !std::isfinite(alpha)) throw std::invalid_argument("annulus_zeros needs alpha >= 0");
  if (!(a_ratio > 0 && a_ratio < 1)) throw std::invalid_argument("annulus_zeros needs a_ratio in (0,1)");
  auto f = [&](double x) {
    return bessel_j(alpha, a_ratio * x) * bessel_y(alpha, x) -
           bessel_j(alpha, x) * bessel_y(alpha, a_ratio * x);
  };
  const double lo = 1e-4;
  return detail::sign_scan_roots(f, lo, f(lo) >= 0 ? 1 : -1, count);
}

// Energy table over the given real angular eigenvalues: q_max radial modes
// per alpha, sorted by energy.
template <class Real = double>
std::vector<RadialMode<Real>> energies(const std::vector<Real>& alpha_list, int q_max,
                                       const Geometry<Real>& geometry) {
  if (q_max < 1) throw std::invalid_argument("energies needs q_max >= 1");
  if (!(geometry.a_outer > 0) || !(geometry.a_ratio >= 0 && geometry.a_ratio < 1))
    throw std::invalid_argument("geometry needs a_outer > 0 and a_ratio in [0,1)");
  std::vector<RadialMode<Real>> out;
  out.reserve(alpha_list.size() * size_t(q_max));
  for (Real alpha : alpha_list) {
    if (!(std::isfinite(double(alpha)) && alpha >= 0))
      throw std::invalid_argument("energies needs real alpha >= 0");
    const auto roots = geometry.a_ratio == 0
                           ? disc_zeros(double(alpha), q_max)
                           : annulus_zeros(double(alpha), double(geometry.a_ratio), q_max);
    for (int q = 1; q <= q_max; ++q) {
      RadialMode<Real> m;
      m.alpha = alpha;
      m.q = q;
      m.kappa = Real(roots[size_t(q - 1)]) / geometry.a_outer;
      m.energy = m.kappa * m.kappa;
      m.geometry = geometry;
      out.push_back(m);
    }
  }
  std::sort(out.begin(), out.end(), [](const RadialMode<Real>& a, const RadialMode<Real>& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    if (a.alpha != b.alpha) return a.alpha < b.alpha;
    return a.q < b.q;
  });
  return out;
}

// Real Bessel order from an angular eigenvalue alpha^2, rejecting the
// PT-broken case (complex alpha handling is out of scope).
template <class Real = double>
Real alpha_from_alpha_sq(std::complex<Real> alpha_sq, Real imag_tol = Real(1e-8)) {
  if (std::abs(alpha_sq.imag()) > imag_tol)
    throw std::invalid_argument("complex alpha^2: PT-broken radial problem is out of scope");
  const Real re = alpha_sq.real();
  if (re < -imag_tol) throw std::invalid_argument("negative alpha^2 has no real Bessel order");
  return std::sqrt(std::max(Real(0), re));
}

} // namespace ptring

#endif
