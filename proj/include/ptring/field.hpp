// Eigenfunction assembly Psi(rho,phi) = R(rho) Phi(phi): angular profiles by
// Fourier synthesis, gain-region vs loss-region weights, and normalized
// probability densities on a polar grid.
#ifndef PTRING_FIELD_HPP
#define PTRING_FIELD_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ptring/angular_operator.hpp"
#include "ptring/bessel.hpp"
#include "ptring/spectrum.hpp"

namespace ptring {

template <class Real = double>
struct AngularMode {
  complex_vector<Real> coefficients; // index i holds c_m with m = i - M
  std::complex<Real> alpha_sq{};
  int cutoff_M() const { return (int(coefficients.size()) - 1) / 2; }
};

template <class Real = double>
struct Weights {
  Real w_gain = 0; // integral of |Phi|^2/2pi over cos(n phi) < 0
  Real w_loss = 0;
};

template <class Real = double>
struct DensityField {
  std::vector<Real> rho_grid; // ascending; ends at the outer boundary
  std::vector<Real> phi_grid; // uniform on [0, 2pi)
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> values; // (rho, phi)
  Geometry<Real> geometry;
  bool mixed = false; // radial order did not match sqrt(alpha^2); single-alpha approximation
};

template <class Real = double>
AngularMode<Real> angular_mode(const Spectrum<Real>& s, int index) {
  if (!s.eigenvectors) throw std::invalid_argument("spectrum carries no eigenvectors");
  if (index < 0 || index >= int(s.eigenvalues.size()))
    throw std::invalid_argument("mode index out of range");
  AngularMode<Real> m;
  m.coefficients = s.eigenvectors->col(index).normalized();
  m.alpha_sq = s.eigenvalues[size_t(index)];
  return m;
}

template <class Real = double>
complex_vector<Real> angular_profile(const AngularMode<Real>& mode, const std::vector<Real>& phi_grid) {
  const int M = mode.cutoff_M();
  complex_vector<Real> out(Eigen::Index(phi_grid.size()));
  for (size_t k = 0; k < phi_grid.size(); ++k) {
    std::complex<Real> v = 0;
    for (int i = 0; i < int(mode.coefficients.size()); ++i)
      v += mode.coefficients(i) * std::polar(Real(1), Real(i - M) * phi_grid[k]);
    out(Eigen::Index(k)) = v;
  }
  return out;
}

// Uniform midpoint grid phi_k = 2pi (k + 1/2) / count: lands on no zero of
// cos(n phi) for the orders in play, and sums |Phi|^2 exactly (no Fourier
// mode of |Phi|^2 aliases onto the mean for count > 4M).
template <class Real = double>
std::vector<Real> midpoint_phi_grid(int count = 1024) {
  if (count < 2) throw std::invalid_argument("phi grid needs at least 2 points");
  std::vector<Real> g(static_cast<size_t>(count));
  for (int k = 0; k < count; ++k)
    g[size_t(k)] = Real(2) * std::numbers::pi_v<Real> * (Real(k) + Real(0.5)) / Real(count);
  return g;
}

template <class Real = double>
Weights<Real> gain_loss_weights(const AngularMode<Real>& mode, int n, int quadrature_count = 1024) {
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("gain_loss_weights needs odd n >= 1");
  const auto phi = midpoint_phi_grid<Real>(quadrature_count);
  const auto prof = angular_profile(mode, phi);
  Weights<Real> w;
  for (size_t k = 0; k < phi.size(); ++k) {
    const Real c = std::cos(Real(n) * phi[k]);
    const Real d = std::norm(prof(Eigen::Index(k))) / Real(quadrature_count);
    if (c < 0) w.w_gain += d;
    else if (c > 0) w.w_loss += d;
  }
  return w;
}

namespace detail {

template <class Real>
Real radial_factor(const RadialMode<Real>& rm, Real rho) {
  const double x = double(rm.kappa * rm.geometry.a_outer);
  if (rm.geometry.a_ratio == 0) return Real(bessel_j(double(rm.alpha), x * double(rho)));
  const double r = double(rm.geometry.a_ratio);
  return Real(bessel_j(double(rm.alpha), x * double(rho)) * bessel_y(double(rm.alpha), x * r) -
              bessel_j(double(rm.alpha), x * r) * bessel_y(double(rm.alpha), x * double(rho)));
}

} // namespace detail

// |R(rho) Phi(phi)|^2 on an (n_rho x n_phi) polar grid in outer-radius units,
// normalized so the discrete integral over rho drho dphi (trapezoid in rho,
// periodic rectangle in phi) equals 1.  The disc grid starts just off the
// origin; the annulus grid includes both boundary rows, which vanish by the
// quantization condition.
template <class Real = double>
DensityField<Real> density(const AngularMode<Real>& mode, const RadialMode<Real>& radial,
                           int n_rho = 256, int n_phi = 512) {
  if (n_rho < 2 || n_phi < 4) throw std::invalid_argument("density grid too small");
  const Real alpha = alpha_from_alpha_sq(mode.alpha_sq);

  DensityField<Real> f;
  f.geometry = radial.geometry;
  f.mixed = std::abs(alpha - radial.alpha) > Real(1e-6) * std::max(Real(1), radial.alpha);

  const Real r0 = radial.geometry.a_ratio;
  f.rho_grid.resize(size_t(n_rho));
  if (r0 == 0)
    for (int i = 0; i < n_rho; ++i) f.rho_grid[size_t(i)] = Real(i + 1) / Real(n_rho);
  else
    for (int i = 0; i < n_rho; ++i)
      f.rho_grid[size_t(i)] = r0 + (Real(1) - r0) * Real(i) / Real(n_rho - 1);
  f.phi_grid.resize(size_t(n_phi));
  for (int j = 0; j < n_phi; ++j)
    f.phi_grid[size_t(j)] = Real(2) * std::numbers::pi_v<Real> * Real(j) / Real(n_phi);

  const auto prof = angular_profile(mode, f.phi_grid);
  std::vector<Real> rad(static_cast<size_t>(n_rho));
  for (int i = 0; i < n_rho; ++i) rad[size_t(i)] = detail::radial_factor(radial, f.rho_grid[size_t(i)]);

  f.values.resize(n_rho, n_phi);
  for (int i = 0; i < n_rho; ++i)
    for (int j = 0; j < n_phi; ++j)
      f.values(i, j) = rad[size_t(i)] * rad[size_t(i)] * std::norm(prof(j));

  const Real dphi = Real(2) * std::numbers::pi_v<Real> / Real(n_phi);
  Real integral = 0;
  for (int i = 0; i < n_rho; ++i) {
    const Real lo = i == 0 ? f.rho_grid[0] : f.rho_grid[size_t(i - 1)];
    const Real hi = i == n_rho - 1 ? f.rho_grid[size_t(i)] : f.rho_grid[size_t(i + 1)];
    const Real w = (hi - lo) / 2;
    integral += w * f.rho_grid[size_t(i)] * f.values.row(i).sum() * dphi;
  }
  if (!(integral > 0)) throw std::runtime_error("density normalization failed: zero integral");
  f.values /= integral;
  return f;
}

} // namespace ptring

#endif
