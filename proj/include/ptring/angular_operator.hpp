// Assembly of the truncated angular-momentum-basis matrix
//
//   A_{mm'} = m^2 delta_{mm'} - (i beta_n/2)(delta_{m,m'+n} + delta_{m,m'-n})
//                            - (lambda_p/2)(delta_{m,m'+p} + delta_{m,m'-p})
//
// summed over the terms of a PotentialSpec, truncated to |m|,|m'| <= M.
// Row/column index i in [0, 2M] maps to m = i - M; all modules share this.
// Dense storage (the band structure is an assembly-time fact only).
#ifndef PTRING_ANGULAR_OPERATOR_HPP
#define PTRING_ANGULAR_OPERATOR_HPP

#include <Eigen/Core>
#include <complex>
#include <stdexcept>

#include "ptring/potential.hpp"

namespace ptring {

template <class Real = double>
using complex_matrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real = double>
using complex_vector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <class Real = double>
struct AngularOperator {
  int cutoff_M = 0;
  int bandwidth = 0; // max term order
  complex_matrix<Real> entries;

  int dimension() const { return 2 * cutoff_M + 1; }
};

template <class Real = double>
AngularOperator<Real> build(const PotentialSpec& spec, int cutoff_M) {
  validate(spec);
  const int mo = spec.max_order();
  if (cutoff_M < 1 || cutoff_M < mo)
    throw std::invalid_argument("cutoff M must be >= 1 and >= the largest term order");

  const int dim = 2 * cutoff_M + 1;
  AngularOperator<Real> op;
  op.cutoff_M = cutoff_M;
  op.bandwidth = mo;
  op.entries = complex_matrix<Real>::Zero(dim, dim);

  for (int i = 0; i < dim; ++i) {
    const Real m = Real(i - cutoff_M);
    op.entries(i, i) = std::complex<Real>(m * m, 0);
  }
  for (const auto& t : spec.gain_loss) {
    const std::complex<Real> c(0, Real(-t.strength_beta) / 2);
    for (int i = 0; i + t.order_n < dim; ++i) {
      op.entries(i, i + t.order_n) += c;
      op.entries(i + t.order_n, i) += c;
    }
  }
  for (const auto& t : spec.hermitian) {
    const std::complex<Real> c(Real(-t.strength_lambda) / 2, 0);
    for (int i = 0; i + t.order_p < dim; ++i) {
      op.entries(i, i + t.order_p) += c;
      op.entries(i + t.order_p, i) += c;
    }
  }
  return op;
}

// Restriction of A to the two levels that merge at the analytic threshold,
// m = (n-1)/2 and -(n+1)/2:
//
//   A_2 = (n^2+1)/4 I - (n/2) sigma_z - (i beta/2) sigma_x
//
// (diagonal mean (n^2+1)/4, half-gap n/2; degenerate exactly at beta = n).
// size=3 is the n=1 special case over m in {-1, 0, 1}.
template <class Real = double>
complex_matrix<Real> reduced_block(int n, int size, Real beta) {
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("reduced_block needs odd n >= 1");
  if (size == 2) {
    const Real a = Real(n * n + 1) / 4;
    const Real g = Real(n) / 2;
    complex_matrix<Real> blk(2, 2);
    blk << std::complex<Real>(a - g, 0), std::complex<Real>(0, -beta / 2),
        std::complex<Real>(0, -beta / 2), std::complex<Real>(a + g, 0);
    return blk;
  }
  if (size == 3) {
    if (n != 1) throw std::invalid_argument("3x3 reduction exists only for n = 1");
    complex_matrix<Real> blk = complex_matrix<Real>::Zero(3, 3);
    blk(0, 0) = blk(2, 2) = std::complex<Real>(1, 0);
    const std::complex<Real> c(0, -beta / 2);
    blk(0, 1) = blk(1, 0) = blk(1, 2) = blk(2, 1) = c;
    return blk;
  }
  throw std::invalid_argument("reduced_block size must be 2 or 3");
}

// A is persymmetric (J A J = A with J the index-reversal) for every
// PotentialSpec: the diagonal is even in m and couplings depend on |m - m'|.
// The eigen layer checks this before using J for parity splitting.
template <class Real>
bool is_persymmetric(const complex_matrix<Real>& a) {
  const auto d = a.rows();
  if (d != a.cols()) return false;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (a(i, j) != a(d - 1 - j, d - 1 - i)) return false;
  return true;
}

} // namespace ptring

#endif
