#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "ptring/phasemap.hpp"
#include "ptring/threshold.hpp"

using namespace ptring;

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

PhaseMap<double> synthetic(std::vector<double> s1, std::vector<double> s2) {
  PhaseMap<double> m;
  m.axis1 = {TermRef{false, 1}, std::move(s1)};
  m.axis2 = {TermRef{true, 2}, std::move(s2)};
  m.values.setZero(Eigen::Index(m.axis1.strengths.size()), Eigen::Index(m.axis2.strengths.size()));
  return m;
}

} // namespace

TEST_CASE("linspace endpoints and spacing") {
  const auto g = linspace(-1.0, 1.0, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == -1.0);
  CHECK(g.back() == 1.0);
  CHECK(g[2] == doctest::Approx(0.0));
  CHECK_THROWS_AS(linspace(0.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("scan rejects malformed axes") {
  AxisSpec<double> a{TermRef{false, 1}, {0.0, 0.5}};
  AxisSpec<double> same{TermRef{false, 1}, {0.0, 1.0}};
  AxisSpec<double> single{TermRef{true, 2}, {0.0}};
  AxisSpec<double> inf{TermRef{true, 2}, {0.0, std::numeric_limits<double>::infinity()}};
  CHECK_THROWS_AS(scan(PotentialSpec{}, a, same, 10), std::invalid_argument);
  CHECK_THROWS_AS(scan(PotentialSpec{}, a, single, 10), std::invalid_argument);
  CHECK_THROWS_AS(scan(PotentialSpec{}, a, inf, 10), std::invalid_argument);
}

TEST_CASE("scan values follow the single-ray phase structure") {
  AxisSpec<double> a1{TermRef{false, 1}, linspace(-1.0, 1.0, 9)};
  AxisSpec<double> a2{TermRef{true, 2}, linspace(-0.5, 0.5, 5)};
  const auto m = scan(PotentialSpec{}, a1, a2, 12);
  CHECK(m.cutoff_M == 12);
  CHECK(m.failures.empty());
  CHECK_FALSE(m.normalization.has_value());
  REQUIRE(m.values.rows() == 9);
  REQUIRE(m.values.cols() == 5);
  for (int j = 0; j < 5; ++j) CHECK(m.values(4, j) == 0.0); // beta = 0: Hermitian row
  CHECK(m.values(0, 2) > 1e-3); // |beta| = 1 > first-order threshold at lambda = 0
  CHECK(m.values(8, 2) > 1e-3);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 5; ++j) CHECK(m.values(i, j) >= 0.0);
}

TEST_CASE("worker count does not change a scan") {
  AxisSpec<double> a1{TermRef{false, 1}, linspace(-1.0, 1.0, 7)};
  AxisSpec<double> a2{TermRef{false, 3}, linspace(-3.0, 3.0, 7)};
  const auto serial = scan(PotentialSpec{}, a1, a2, 10, 1);
  const auto threaded = scan(PotentialSpec{}, a1, a2, 10, 3);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) CHECK(serial.values(i, j) == threaded.values(i, j));
}

TEST_CASE("gain-loss sign flip is an exact mirror at fixed hermitian strength") {
  AxisSpec<double> a1{TermRef{false, 1}, linspace(-1.0, 1.0, 13)};
  AxisSpec<double> a2{TermRef{true, 2}, linspace(-0.8, 0.8, 11)};
  const auto m = scan(PotentialSpec{}, a1, a2, 12);
  const auto rep = symmetry_check(m, SymmetryKind::axis1_sign_flip, 1e-9);
  CHECK(rep.pass);
  CHECK(rep.max_asymmetry < 1e-9);
  // flipping the hermitian strength alone is not a symmetry of this model
  const auto rep2 = symmetry_check(m, SymmetryKind::axis2_sign_flip, 1e-9);
  CHECK_FALSE(rep2.pass);
  CHECK(rep2.max_asymmetry > 0.1);
}

TEST_CASE("simultaneous sign flip of two gain-loss strengths is an exact mirror") {
  AxisSpec<double> a1{TermRef{false, 1}, linspace(-1.0, 1.0, 13)};
  AxisSpec<double> a2{TermRef{false, 3}, linspace(-3.3, 3.3, 11)};
  const auto m = scan(PotentialSpec{}, a1, a2, 12);
  const auto rep = symmetry_check(m, SymmetryKind::point_reflection, 1e-9);
  CHECK(rep.pass);
  CHECK(rep.max_asymmetry < 1e-9);
  const auto rep2 = symmetry_check(m, SymmetryKind::axis1_sign_flip, 1e-9);
  CHECK_FALSE(rep2.pass);
  CHECK(rep2.max_asymmetry > 0.1);
}

TEST_CASE("symmetry check requires a centered grid on each flipped axis") {
  AxisSpec<double> off{TermRef{false, 1}, linspace(0.0, 1.0, 5)};
  AxisSpec<double> even{TermRef{true, 2}, linspace(-1.0, 1.0, 4)};
  AxisSpec<double> ok{TermRef{false, 3}, linspace(-1.0, 1.0, 5)};
  const auto m = scan(PotentialSpec{}, off, ok, 10);
  CHECK_THROWS_AS(symmetry_check(m, SymmetryKind::axis1_sign_flip), std::invalid_argument);
  CHECK_NOTHROW(symmetry_check(m, SymmetryKind::axis2_sign_flip));
  const auto m2 = scan(PotentialSpec{}, ok, even, 10);
  CHECK_THROWS_AS(symmetry_check(m2, SymmetryKind::axis2_sign_flip), std::invalid_argument);
}

TEST_CASE("threshold curve interpolates the first crossing on a synthetic map") {
  auto m = synthetic({0.0, 1.0, 2.0}, {-2.0, -1.0, 0.0, 1.0, 2.0});
  m.values.row(0) << 0.5, 0.2, 0.0, 0.0, 0.3;  // crossing between 1 and 2
  m.values.row(1) << 0.0, 0.0, 0.5, 0.0, 0.0;  // broken already at 0
  m.values.row(2) << 0.0, 0.0, 0.0, 0.0, 0.0;  // never crosses

  const auto up = threshold_curve(m, 1, +1, 1e-6);
  REQUIRE(up.size() == 3);
  CHECK(up[0].fixed == 0.0);
  CHECK_FALSE(up[0].open);
  CHECK(up[0].crossing == doctest::Approx(1.0 + 1e-6 / 0.3).epsilon(1e-9));
  CHECK(up[1].crossing == 0.0);
  CHECK_FALSE(up[1].open);
  CHECK(up[2].open);
  CHECK(up[2].crossing == 2.0);

  const auto down = threshold_curve(m, 1, -1, 1e-6);
  CHECK(down[0].crossing == doctest::Approx(-1e-6 / 0.2).epsilon(1e-6));
  CHECK(down[2].open);
  CHECK(down[2].crossing == -2.0);
}

TEST_CASE("threshold curve skips failed cells and falls back across them") {
  auto m = synthetic({0.0, 1.0}, {0.0, 1.0, 2.0, 3.0});
  m.values.row(0) << 0.0, nan_v, 0.4, 0.6;    // bracket spans the NaN gap
  m.values.row(1) << nan_v, 0.4, 0.5, 0.6;    // no clean lower endpoint
  const auto c = threshold_curve(m, 1, +1, 1e-6);
  CHECK(c[0].crossing == doctest::Approx(1e-6 * 2.0 / 0.4).epsilon(1e-6));
  CHECK(c[1].crossing == 1.0); // first finite value above epsilon, no interpolation
}

TEST_CASE("threshold curve along the other axis and argument validation") {
  auto m = synthetic({0.0, 1.0, 2.0}, {0.0, 0.7});
  m.values << 0.0, 0.0,
              0.0, 0.2,
              0.1, 0.3;
  const auto c = threshold_curve(m, 2, +1, 1e-6);
  REQUIRE(c.size() == 2);
  CHECK(c[0].fixed == 0.0);
  CHECK(c[0].crossing == doctest::Approx(1.0 + 1e-6 / 0.1).epsilon(1e-6));
  CHECK(c[1].crossing == doctest::Approx(1e-6 * 1.0 / 0.2).epsilon(1e-6));
  CHECK_THROWS_AS(threshold_curve(m, 3), std::invalid_argument);
  CHECK_THROWS_AS(threshold_curve(m, 1, 0), std::invalid_argument);
}

TEST_CASE("grid threshold curve agrees with the bisection solver") {
  AxisSpec<double> a1{TermRef{true, 2}, {-0.5, 0.0, 0.5}};
  AxisSpec<double> a2{TermRef{false, 1}, linspace(0.0, 1.2, 61)};
  const auto m = scan(PotentialSpec{}, a1, a2, 12);
  const auto curve = threshold_curve(m, 1, +1, 1e-6);
  ThresholdOptions<> opt;
  opt.epsilon = 1e-6;
  opt.trace_levels = false;
  for (size_t i = 0; i < curve.size(); ++i) {
    PotentialSpec base;
    base.hermitian = {{2, m.axis1.strengths[i]}};
    const auto r = find_threshold(base, TermRef{false, 1}, 12, opt);
    CHECK_FALSE(curve[i].open);
    // the square-root onset pins the interpolated crossing to the cell floor,
    // so one grid cell (0.02) bounds the disagreement
    CHECK(std::abs(curve[i].crossing - r.beta_c) < 0.025);
  }
}

TEST_CASE("normalized scan rescales both axes by their single-ray thresholds") {
  const auto m = scan_normalized(PotentialSpec{}, TermRef{false, 1}, -1.2, 1.2, 7,
                                 TermRef{false, 3}, -1.2, 1.2, 7, 10);
  REQUIRE(m.normalization.has_value());
  const double c1 = (*m.normalization)[0];
  const double c2 = (*m.normalization)[1];
  CHECK(c1 == doctest::Approx(0.734).epsilon(0.01));
  CHECK(c2 == doctest::Approx(2.936).epsilon(0.01));
  CHECK(m.axis1.strengths.front() == doctest::Approx(-1.2 * c1));
  CHECK(m.axis1.strengths.back() == doctest::Approx(1.2 * c1));
  CHECK(m.axis2.strengths[3] == doctest::Approx(0.0));
  // unit cells just past the threshold on each axis are broken
  const auto rep = symmetry_check(m, SymmetryKind::point_reflection, 1e-9);
  CHECK(rep.pass);
}
