// Dense complex eigensolver layer: full spectra, optional eigenvectors,
// PT-aware post-processing (sorting, conjugate pairing, max |Im|,
// parity splitting of degenerate real levels, defectiveness flagging).
//
// The solves delegate to Eigen's ComplexSchur / ComplexEigenSolver
// (balanced Hessenberg reduction + implicitly shifted QR); an independent
// characteristic-polynomial oracle in the test tree cross-checks them on
// small random matrices.
#ifndef PTRING_SPECTRUM_HPP
#define PTRING_SPECTRUM_HPP

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ptring/angular_operator.hpp"

namespace ptring {

template <class Real = double>
struct Spectrum {
  std::vector<std::complex<Real>> eigenvalues; // sorted by Re, then Im
  std::optional<complex_matrix<Real>> eigenvectors; // columns aligned with eigenvalues
  Real max_imag = 0;
  bool defective = false; // some eigenspace observed rank-deficient
};

namespace detail {

template <class Real>
void check_input(const complex_matrix<Real>& a) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw std::invalid_argument("eigensolver needs a square matrix of dimension >= 1");
  if (!a.allFinite()) throw std::invalid_argument("matrix has NaN/Inf entries");
}

template <class Real>
bool eig_less(const std::complex<Real>& x, const std::complex<Real>& y) {
  if (x.real() != y.real()) return x.real() < y.real();
  return x.imag() < y.imag();
}

template <class Real>
std::vector<Eigen::Index> sort_order(const std::vector<std::complex<Real>>& w) {
  std::vector<Eigen::Index> idx(w.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return eig_less(w[i], w[j]); });
  return idx;
}

// Split the eigenvectors of a group of (near-)degenerate real eigenvalues
// into even/odd components under the index reversal J (m -> -m).
//
// Dense solvers return arbitrary complex mixtures inside a degenerate
// eigenspace; a mixture of J-even and J-odd states has pi-rotation-odd
// density cross terms, which would break the |Phi(phi)|^2 = |Phi(phi+pi)|^2
// guarantee for real modes.  When A commutes with J the split below restores
// parity-pure vectors:
//  - project the group's vectors onto the J-even and J-odd subspaces,
//  - take an SVD basis of each projection (keep sigma > 1e-3 sigma_max;
//    plain QR is order-sensitive here and can amplify a ~1e-11 projection
//    of a parity-pure vector into pure noise),
//  - if the two ranks add up to the group size, adopt the new basis and
//    assign vectors to eigenvalues by sorted Rayleigh quotients.
template <class Real>
void parity_split_group(const complex_matrix<Real>& a, std::vector<std::complex<Real>>& w,
                        complex_matrix<Real>& v, const std::vector<Eigen::Index>& group) {
  const Eigen::Index dim = a.rows();
  const int k = int(group.size());
  complex_matrix<Real> b(dim, k);
  for (int t = 0; t < k; ++t) b.col(t) = v.col(group[t]);

  complex_matrix<Real> basis(dim, 0);
  for (int sign = 0; sign < 2; ++sign) {
    complex_matrix<Real> p(dim, k);
    for (int t = 0; t < k; ++t) {
      auto rev = b.col(t).reverse().eval();
      if (sign == 0)
        p.col(t) = Real(0.5) * (b.col(t) + rev);
      else
        p.col(t) = Real(0.5) * (b.col(t) - rev);
    }
    Eigen::JacobiSVD<complex_matrix<Real>> svd(p, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) < Real(1e-3)) continue;
    int rank = 0;
    while (rank < sv.size() && sv(rank) > Real(1e-3) * sv(0)) ++rank;
    basis.conservativeResize(Eigen::NoChange, basis.cols() + rank);
    basis.rightCols(rank) = svd.matrixU().leftCols(rank);
  }
  if (basis.cols() != k) return; // projection ranks inconsistent; leave untouched

  std::vector<Real> ray(k);
  for (int t = 0; t < k; ++t)
    ray[t] = (basis.col(t).adjoint() * (a * basis.col(t)))(0, 0).real();
  std::vector<int> corder(k);
  std::iota(corder.begin(), corder.end(), 0);
  std::sort(corder.begin(), corder.end(), [&](int x, int y) { return ray[x] < ray[y]; });
  std::vector<Eigen::Index> eorder(group);
  std::sort(eorder.begin(), eorder.end(),
            [&](Eigen::Index x, Eigen::Index y) { return w[x].real() < w[y].real(); });
  for (int t = 0; t < k; ++t) v.col(eorder[t]) = basis.col(corder[t]);
}

// Group eigenvalues by chained closeness |w_i - w_j| <= tol * max(1, |w_i|),
// assuming indices are already sorted by real part.
template <class Real, class F>
void for_each_group(const std::vector<std::complex<Real>>& w, Real tol, F&& f) {
  const auto n = Eigen::Index(w.size());
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i;
    while (j + 1 < n &&
           std::abs(w[j + 1] - w[i]) <= tol * std::max(Real(1), std::abs(w[i])))
      ++j;
    if (j > i) {
      std::vector<Eigen::Index> group;
      for (Eigen::Index t = i; t <= j; ++t) group.push_back(t);
      f(group);
    }
    i = j + 1;
  }
}

template <class Real>
Real group_max_overlap(const complex_matrix<Real>& v, const std::vector<Eigen::Index>& group) {
  Real worst = 0;
  for (size_t x = 0; x < group.size(); ++x)
    for (size_t y = x + 1; y < group.size(); ++y) {
      const Real ov = std::abs((v.col(group[x]).adjoint() * v.col(group[y]))(0, 0));
      worst = std::max(worst, ov);
    }
  return worst;
}

} // namespace detail

template <class Real = double>
Real max_imag(const Spectrum<Real>& s) {
  Real mi = 0;
  for (const auto& w : s.eigenvalues) mi = std::max(mi, std::abs(w.imag()));
  return mi;
}

template <class Real = double>
Spectrum<Real> eigvals(const complex_matrix<Real>& a) {
  detail::check_input(a);
  Eigen::ComplexSchur<complex_matrix<Real>> schur(a, /*computeU=*/false);
  if (schur.info() != Eigen::Success)
    throw std::runtime_error("complex Schur iteration did not converge");
  Spectrum<Real> s;
  s.eigenvalues.resize(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) s.eigenvalues[i] = schur.matrixT()(i, i);
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), detail::eig_less<Real>);
  s.max_imag = max_imag(s);
  return s;
}

// Every cos band couples m and -m symmetrically, so a built operator commutes
// exactly with the index reversal J; rotating to the J-even/J-odd basis
// block-diagonalizes it and roughly quarters the Schur cost.  Blocks, with
// u_0 = e_0, u_k = (e_{-k} + e_k)/sqrt(2), v_k = (e_{-k} - e_k)/sqrt(2):
//   E_00 = A_00, E_0k = sqrt(2) A_{0k}, E_kl = A_{kl} + A_{k,-l},
//   O_kl = A_{kl} - A_{k,-l}.
template <class Real = double>
Spectrum<Real> eigvals(const AngularOperator<Real>& op) {
  const auto& a = op.entries;
  if (a.rows() < 3 || a.rows() % 2 == 0 || !is_persymmetric(a)) return eigvals<Real>(a);
  const Eigen::Index M = (a.rows() - 1) / 2;
  const Real r2 = std::sqrt(Real(2));
  complex_matrix<Real> even(M + 1, M + 1), odd(M, M);
  even(0, 0) = a(M, M);
  for (Eigen::Index k = 1; k <= M; ++k) {
    even(0, k) = r2 * a(M, M + k);
    even(k, 0) = r2 * a(M + k, M);
    for (Eigen::Index l = 1; l <= M; ++l) {
      even(k, l) = a(M + k, M + l) + a(M + k, M - l);
      odd(k - 1, l - 1) = a(M + k, M + l) - a(M + k, M - l);
    }
  }
  const auto se = eigvals<Real>(even);
  const auto so = eigvals<Real>(odd);
  Spectrum<Real> s;
  s.eigenvalues.reserve(size_t(a.rows()));
  std::merge(se.eigenvalues.begin(), se.eigenvalues.end(), so.eigenvalues.begin(),
             so.eigenvalues.end(), std::back_inserter(s.eigenvalues), detail::eig_less<Real>);
  s.max_imag = std::max(se.max_imag, so.max_imag);
  return s;
}

template <class Real = double>
Spectrum<Real> eigpairs(const complex_matrix<Real>& a) {
  detail::check_input(a);
  Eigen::ComplexEigenSolver<complex_matrix<Real>> es(a, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("complex eigensolver did not converge");

  std::vector<std::complex<Real>> w(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) w[i] = es.eigenvalues()(i);
  const auto order = detail::sort_order(w);

  Spectrum<Real> s;
  s.eigenvalues.resize(w.size());
  complex_matrix<Real> v(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    s.eigenvalues[i] = w[order[i]];
    v.col(i) = es.eigenvectors().col(order[i]).normalized();
  }
  s.max_imag = max_imag(s);

  // Defectiveness scan: a loose eigenvalue group whose vectors are nearly
  // parallel marks an exceptional-point neighbourhood.
  std::vector<bool> in_defective(w.size(), false);
  detail::for_each_group<Real>(s.eigenvalues, Real(1e-4), [&](const auto& group) {
    if (detail::group_max_overlap(v, group) > Real(1) - Real(1e-4)) {
      s.defective = true;
      for (auto i : group) in_defective[size_t(i)] = true;
    }
  });

  if (is_persymmetric(a)) {
    detail::for_each_group<Real>(s.eigenvalues, Real(1e-6), [&](const auto& group) {
      bool ok = true;
      for (auto i : group)
        if (in_defective[size_t(i)] ||
            std::abs(s.eigenvalues[i].imag()) > Real(1e-8) * std::max(Real(1), std::abs(s.eigenvalues[i])))
          ok = false;
      if (ok) detail::parity_split_group(a, s.eigenvalues, v, group);
    });
  }

  s.eigenvectors = std::move(v);
  return s;
}

template <class Real = double>
Spectrum<Real> eigpairs(const AngularOperator<Real>& op) {
  return eigpairs<Real>(op.entries);
}

// Largest eigenpair residual, for backward-stability spot checks.
template <class Real = double>
Real max_residual(const complex_matrix<Real>& a, const Spectrum<Real>& s) {
  if (!s.eigenvectors) throw std::invalid_argument("spectrum carries no eigenvectors");
  Real worst = 0;
  for (Eigen::Index i = 0; i < Eigen::Index(s.eigenvalues.size()); ++i) {
    const auto v = s.eigenvectors->col(i);
    worst = std::max(worst, (a * v - s.eigenvalues[size_t(i)] * v).norm());
  }
  return worst;
}

} // namespace ptring

#endif
