#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <complex>
#include <random>

#include "generators.hpp"
#include "oracle_charpoly.hpp"
#include "ptring/angular_operator.hpp"
#include "ptring/spectrum.hpp"

using namespace ptring;
using cd = std::complex<double>;

TEST_CASE("eigvals matches the characteristic-polynomial oracle on 1000 small matrices") {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> dim_dist(1, 5);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = dim_dist(rng);
    const auto a = gen::random_complex_matrix(rng, d);
    const auto s = eigvals(a);
    const auto reference = oracle::eigenvalues(a);
    std::vector<cd> computed(s.eigenvalues.begin(), s.eigenvalues.end());
    worst = std::max(worst, oracle::multiset_distance(reference, computed));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("eigenvalues come back sorted by real part then imaginary part") {
  std::mt19937_64 rng(102);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = eigvals(gen::random_complex_matrix(rng, 12));
    for (size_t i = 1; i < s.eigenvalues.size(); ++i) {
      const auto &a = s.eigenvalues[i - 1], &b = s.eigenvalues[i];
      CHECK((a.real() < b.real() || (a.real() == b.real() && a.imag() <= b.imag())));
    }
  }
}

TEST_CASE("diagonal input returns its diagonal sorted") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(5, 5);
  a(0, 0) = 4; a(1, 1) = 1; a(2, 2) = 0; a(3, 3) = 1; a(4, 4) = 4;
  const auto s = eigvals(a);
  const double expect[] = {0, 1, 1, 4, 4};
  for (int i = 0; i < 5; ++i) CHECK(s.eigenvalues[size_t(i)].real() == doctest::Approx(expect[i]));
  CHECK(s.max_imag == 0.0);
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(eigvals(Eigen::MatrixXcd(2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(eigvals(Eigen::MatrixXcd(0, 0)), std::invalid_argument);
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(3, 3);
  bad(1, 2) = cd(std::numeric_limits<double>::quiet_NaN(), 0);
  CHECK_THROWS_AS(eigvals(bad), std::invalid_argument);
  CHECK_THROWS_AS(eigpairs(bad), std::invalid_argument);
}

TEST_CASE("max_imag reads the largest |Im| off the spectrum") {
  Spectrum<double> s;
  s.eigenvalues = {cd(2.5, 0.3), cd(2.5, -0.3), cd(9, 0)};
  CHECK(max_imag(s) == doctest::Approx(0.3));
  s.eigenvalues = {cd(0, 0), cd(1, 0), cd(4, 0)};
  CHECK(max_imag(s) == 0.0);
}

TEST_CASE("eigenpair residuals stay within backward-stability bounds") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = gen::random_complex_matrix(rng, 2 + trial % 15);
    const auto s = eigpairs(a);
    CHECK(max_residual(a, s) <= 1e-8 * a.norm());
    for (Eigen::Index c = 0; c < s.eigenvectors->cols(); ++c)
      CHECK(s.eigenvectors->col(c).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (int trial = 0; trial < 10; ++trial) {
    const auto op = build(gen::random_spec(rng), gen::random_cutoff(rng));
    const auto s = eigpairs(op);
    CHECK(max_residual(op.entries, s) <= 1e-8 * op.entries.norm());
  }
}

TEST_CASE("operator spectra are conjugation-symmetric multisets") {
  std::mt19937_64 rng(104);
  for (int trial = 0; trial < 200; ++trial) {
    const auto op = build(gen::random_spec(rng), gen::random_cutoff(rng));
    const auto s = eigvals(op);
    std::vector<cd> pool(s.eigenvalues.begin(), s.eigenvalues.end());
    double worst = 0;
    for (const auto& w : s.eigenvalues) {
      const cd target = std::conj(w);
      size_t best = 0;
      for (size_t i = 1; i < pool.size(); ++i)
        if (std::abs(pool[i] - target) < std::abs(pool[best] - target)) best = i;
      worst = std::max(worst, std::abs(pool[best] - target));
      pool.erase(pool.begin() + ptrdiff_t(best));
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("parity-block path agrees with the dense solver on built operators") {
  std::mt19937_64 rng(106);
  for (int trial = 0; trial < 50; ++trial) {
    const auto op = build(gen::random_spec(rng), gen::random_cutoff(rng));
    const auto blocked = eigvals(op);
    const auto dense = eigvals(op.entries);
    REQUIRE(blocked.eigenvalues.size() == dense.eigenvalues.size());
    const double scale = op.entries.norm();
    std::vector<cd> pool(dense.eigenvalues.begin(), dense.eigenvalues.end());
    double worst = 0;
    for (const auto& w : blocked.eigenvalues) {
      size_t best = 0;
      for (size_t i = 1; i < pool.size(); ++i)
        if (std::abs(pool[i] - w) < std::abs(pool[best] - w)) best = i;
      worst = std::max(worst, std::abs(pool[best] - w));
      pool.erase(pool.begin() + ptrdiff_t(best));
    }
    CHECK(worst <= 1e-10 * scale);
    CHECK(std::abs(blocked.max_imag - dense.max_imag) <= 1e-10 * scale);
    for (size_t i = 1; i < blocked.eigenvalues.size(); ++i) {
      const auto &a = blocked.eigenvalues[i - 1], &b = blocked.eigenvalues[i];
      CHECK((a.real() < b.real() || (a.real() == b.real() && a.imag() <= b.imag())));
    }
  }
}

TEST_CASE("eigenvalue sums reproduce the trace") {
  std::mt19937_64 rng(105);
  for (int trial = 0; trial < 200; ++trial) {
    const auto op = build(gen::random_spec(rng), gen::random_cutoff(rng));
    const auto s = eigvals(op);
    cd sum(0);
    for (const auto& w : s.eigenvalues) sum += w;
    const cd tr = op.entries.trace();
    CHECK(std::abs(sum - tr) <= 1e-8 * std::abs(tr) + 1e-10);
  }
}

TEST_CASE("identity matrix yields a clean triple-degenerate basis") {
  const auto s = eigpairs(Eigen::MatrixXcd::Identity(3, 3).eval());
  for (const auto& w : s.eigenvalues) CHECK(std::abs(w - cd(1, 0)) < 1e-12);
  CHECK_FALSE(s.defective);
  CHECK(max_residual(Eigen::MatrixXcd::Identity(3, 3).eval(), s) < 1e-12);
}

TEST_CASE("a Jordan block is flagged defective") {
  Eigen::MatrixXcd a(2, 2);
  a << cd(5, 0), cd(1, 0), cd(0, 0), cd(5, 0);
  const auto s = eigpairs(a);
  CHECK(s.defective);
}

TEST_CASE("the reduced block at its degeneracy point is flagged defective") {
  const auto s = eigpairs(reduced_block(3, 2, 3.0));
  CHECK(std::abs(s.eigenvalues[0] - s.eigenvalues[1]) < 1e-6);
  const double overlap = std::abs((s.eigenvectors->col(0).adjoint() * s.eigenvectors->col(1))(0, 0));
  CHECK(overlap > 1 - 1e-4);
  CHECK(s.defective);
}

TEST_CASE("near the first-order exceptional point the leading eigenvectors align") {
  PotentialSpec spec;
  spec.gain_loss = {{1, 0.73438454}};
  const auto s = eigpairs(build(spec, 100));
  CHECK(std::abs(s.eigenvalues[0] - s.eigenvalues[1]) < 0.05);
  const double overlap = std::abs((s.eigenvectors->col(0).adjoint() * s.eigenvectors->col(1))(0, 0));
  CHECK(overlap > 0.9);
}

TEST_CASE("small-strength ground mode is dominated by the m=0 coefficient") {
  const double beta = 0.05 * 0.7350;
  PotentialSpec spec;
  spec.gain_loss = {{1, beta}};
  const auto s = eigpairs(build(spec, 100));
  const double c0_sq = std::norm((*s.eigenvectors)(100, 0));
  CHECK(c0_sq > 0.99);
  // second-order perturbation: |c_0|^2 = 1 - beta^2/2 + O(beta^4)
  CHECK(c0_sq == doctest::Approx(1 - beta * beta / 2).epsilon(1e-4));
}

TEST_CASE("exactly degenerate mirror pairs come back parity-pure") {
  PotentialSpec spec;
  spec.gain_loss = {{3, 1.0}};
  const auto op = build(spec, 15);
  const auto s = eigpairs(op);
  CHECK(max_residual(op.entries, s) <= 1e-8 * op.entries.norm());
  const Eigen::Index d = op.entries.rows();
  for (size_t i = 0; i + 1 < s.eigenvalues.size(); ++i) {
    if (std::abs(s.eigenvalues[i + 1] - s.eigenvalues[i]) > 1e-6) continue;
    if (std::abs(s.eigenvalues[i].imag()) > 1e-8) continue;
    for (size_t c : {i, i + 1}) {
      const auto v = s.eigenvectors->col(Eigen::Index(c));
      const auto rev = v.reverse().eval();
      const double parity_defect = std::min((rev - v).norm(), (rev + v).norm());
      CHECK(parity_defect < 1e-6);
    }
  }
}
