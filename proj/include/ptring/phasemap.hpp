// Phase-diagram scans: max |Im| of the angular spectrum over a 2D grid of two
// potential strengths, mirror-symmetry reports, and first-crossing threshold
// curves extracted from the grid.
#ifndef PTRING_PHASEMAP_HPP
#define PTRING_PHASEMAP_HPP

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptring/angular_operator.hpp"
#include "ptring/parallel.hpp"
#include "ptring/potential.hpp"
#include "ptring/spectrum.hpp"
#include "ptring/threshold.hpp"

namespace ptring {

template <class Real = double>
struct AxisSpec {
  TermRef term;
  std::vector<Real> strengths;
};

template <class Real = double>
std::vector<Real> linspace(Real lo, Real hi, int count) {
  if (count < 2) throw std::invalid_argument("linspace needs at least 2 points");
  std::vector<Real> out(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i)
    out[size_t(i)] = lo + (hi - lo) * Real(i) / Real(count - 1);
  return out;
}

template <class Real = double>
struct PhaseMap {
  AxisSpec<Real> axis1, axis2;
  // values(i, j) = max |Im| at (axis1.strengths[i], axis2.strengths[j]);
  // NaN marks a cell whose eigensolve failed (see failures).
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> values;
  int cutoff_M = 0;
  std::optional<std::array<Real, 2>> normalization; // per-axis beta_kc for scaled axes
  std::vector<std::string> failures;
};

enum class SymmetryKind { point_reflection, axis1_sign_flip, axis2_sign_flip };

template <class Real = double>
struct SymmetryReport {
  SymmetryKind kind;
  Real max_asymmetry = 0;
  Real tolerance = 0;
  bool pass = false;
};

template <class Real = double>
struct CurvePoint {
  Real fixed = 0;    // strength on the selected axis
  Real crossing = 0; // interpolated first crossing along the other axis
  bool open = false; // no crossing inside the scanned range
};

template <class Real = double>
PhaseMap<Real> scan(const PotentialSpec& base, const AxisSpec<Real>& axis1,
                    const AxisSpec<Real>& axis2, int cutoff_M, int workers = 1) {
  if (term_label(axis1.term) == term_label(axis2.term))
    throw std::invalid_argument("phase-map axes must use distinct terms");
  if (axis1.strengths.size() < 2 || axis2.strengths.size() < 2)
    throw std::invalid_argument("each axis needs at least 2 strengths");
  for (const auto& ax : {axis1, axis2})
    for (Real s : ax.strengths)
      if (!std::isfinite(double(s))) throw std::invalid_argument("axis strengths must be finite");

  const int n1 = int(axis1.strengths.size());
  const int n2 = int(axis2.strengths.size());
  PhaseMap<Real> map;
  map.axis1 = axis1;
  map.axis2 = axis2;
  map.cutoff_M = cutoff_M;
  map.values.resize(n1, n2);

  std::vector<std::string> cell_failures(size_t(n1) * size_t(n2));
  parallel_for(size_t(n1) * size_t(n2), workers, [&](size_t idx) {
    const int i = int(idx) / n2;
    const int j = int(idx) % n2;
    try {
      auto spec = with_strength(base, axis1.term, double(axis1.strengths[size_t(i)]));
      spec = with_strength(spec, axis2.term, double(axis2.strengths[size_t(j)]));
      map.values(i, j) = eigvals<Real>(build<Real>(spec, cutoff_M)).max_imag;
    } catch (const std::exception& e) {
      map.values(i, j) = std::numeric_limits<Real>::quiet_NaN();
      cell_failures[idx] = "cell (" + std::to_string(i) + "," + std::to_string(j) + "): " + e.what();
    }
  });
  for (auto& msg : cell_failures)
    if (!msg.empty()) map.failures.push_back(std::move(msg));
  return map;
}

// Scan with both axes in units of the single-ray threshold beta_kc of the
// axis term, computed by find_threshold at the same cutoff before the sweep.
template <class Real = double>
PhaseMap<Real> scan_normalized(const PotentialSpec& base, TermRef t1, Real lo1, Real hi1,
                               int count1, TermRef t2, Real lo2, Real hi2, int count2,
                               int cutoff_M, int workers = 1) {
  ThresholdOptions<Real> opt;
  opt.trace_levels = false;
  opt.workers = workers;
  const Real c1 = find_threshold<Real>(PotentialSpec{}, t1, cutoff_M, opt).beta_c;
  const Real c2 = find_threshold<Real>(PotentialSpec{}, t2, cutoff_M, opt).beta_c;
  AxisSpec<Real> a1{t1, linspace(lo1 * c1, hi1 * c1, count1)};
  AxisSpec<Real> a2{t2, linspace(lo2 * c2, hi2 * c2, count2)};
  auto map = scan<Real>(base, a1, a2, cutoff_M, workers);
  map.normalization = {c1, c2};
  return map;
}

namespace detail {

template <class Real>
bool centered(const std::vector<Real>& s) {
  const int n = int(s.size());
  if (n % 2 == 0) return false;
  Real scale = 0;
  for (Real v : s) scale = std::max(scale, std::abs(v));
  for (int i = 0; i < n; ++i)
    if (std::abs(s[size_t(i)] + s[size_t(n - 1 - i)]) > Real(1e-9) * std::max(Real(1), scale))
      return false;
  return true;
}

} // namespace detail

// Largest |values(i,j) - values(mirror(i,j))| under the requested mirror.
// Cells whose own or mirrored value is NaN are skipped (they are listed in
// map.failures).
template <class Real = double>
SymmetryReport<Real> symmetry_check(const PhaseMap<Real>& map, SymmetryKind kind,
                                    Real tolerance = Real(1e-6)) {
  const bool flip1 = kind != SymmetryKind::axis2_sign_flip;
  const bool flip2 = kind != SymmetryKind::axis1_sign_flip;
  if (flip1 && !detail::centered(map.axis1.strengths))
    throw std::invalid_argument("axis1 grid is not centered about zero");
  if (flip2 && !detail::centered(map.axis2.strengths))
    throw std::invalid_argument("axis2 grid is not centered about zero");

  const int n1 = int(map.axis1.strengths.size());
  const int n2 = int(map.axis2.strengths.size());
  SymmetryReport<Real> rep;
  rep.kind = kind;
  rep.tolerance = tolerance;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      const Real a = map.values(i, j);
      const Real b = map.values(flip1 ? n1 - 1 - i : i, flip2 ? n2 - 1 - j : j);
      if (std::isnan(double(a)) || std::isnan(double(b))) continue;
      rep.max_asymmetry = std::max(rep.max_asymmetry, std::abs(a - b));
    }
  rep.pass = rep.max_asymmetry <= tolerance;
  return rep;
}

// For each strength on `axis` (1 or 2), walks the other axis outward from the
// cell nearest zero in the given direction and returns the first epsilon
// crossing, linearly interpolated between the bracketing cells.  A row that is
// already broken at zero reports crossing 0; a row with no crossing in range
// is marked open (crossing = extreme grid strength).
template <class Real = double>
std::vector<CurvePoint<Real>> threshold_curve(const PhaseMap<Real>& map, int axis,
                                              int direction = +1, Real epsilon = Real(1e-6)) {
  if (axis != 1 && axis != 2) throw std::invalid_argument("axis must be 1 or 2");
  if (direction != 1 && direction != -1) throw std::invalid_argument("direction must be +1 or -1");
  const auto& fixed_s = axis == 1 ? map.axis1.strengths : map.axis2.strengths;
  const auto& scan_s = axis == 1 ? map.axis2.strengths : map.axis1.strengths;
  const int nf = int(fixed_s.size());
  const int ns = int(scan_s.size());

  int j0 = 0;
  for (int j = 1; j < ns; ++j)
    if (std::abs(scan_s[size_t(j)]) < std::abs(scan_s[size_t(j0)])) j0 = j;

  std::vector<CurvePoint<Real>> out(static_cast<size_t>(nf));
  for (int i = 0; i < nf; ++i) {
    auto value = [&](int j) { return axis == 1 ? map.values(i, j) : map.values(j, i); };
    CurvePoint<Real>& pt = out[size_t(i)];
    pt.fixed = fixed_s[size_t(i)];
    int jp = j0;
    Real vp = value(j0);
    if (!std::isnan(double(vp)) && vp > epsilon) {
      pt.crossing = scan_s[size_t(j0)];
      continue;
    }
    bool found = false;
    for (int j = j0 + direction; j >= 0 && j < ns; j += direction) {
      const Real v = value(j);
      if (std::isnan(double(v))) continue;
      if (v > epsilon) {
        const Real sp = scan_s[size_t(jp)], sj = scan_s[size_t(j)];
        pt.crossing = std::isnan(double(vp))
                          ? sj
                          : sp + (epsilon - vp) * (sj - sp) / (v - vp);
        found = true;
        break;
      }
      jp = j;
      vp = v;
    }
    if (!found) {
      pt.open = true;
      pt.crossing = scan_s[size_t(direction > 0 ? ns - 1 : 0)];
    }
  }
  return out;
}

} // namespace ptring

#endif
