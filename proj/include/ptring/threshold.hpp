// PT-breaking threshold location along one-parameter strength rays:
// coarse forward scan of max |Im| followed by bisection, closed-form 2x2/3x3
// estimates, eigenvalue flow tracing with continuity matching, and the
// threshold-error sequence Delta_n = |beta_nc - n|.
#ifndef PTRING_THRESHOLD_HPP
#define PTRING_THRESHOLD_HPP

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ptring/angular_operator.hpp"
#include "ptring/parallel.hpp"
#include "ptring/potential.hpp"
#include "ptring/spectrum.hpp"

namespace ptring {

enum class ThresholdMethod { scan_bisect, analytic_2x2, analytic_3x3 };

inline const char* method_name(ThresholdMethod m) {
  switch (m) {
    case ThresholdMethod::scan_bisect: return "scan_bisect";
    case ThresholdMethod::analytic_2x2: return "analytic_2x2";
    case ThresholdMethod::analytic_3x3: return "analytic_3x3";
  }
  return "unknown";
}

template <class Real = double>
struct ThresholdResult {
  Real beta_c = 0;
  Real bracket_lo = 0; // max |Im| <= epsilon here
  Real bracket_hi = 0; // max |Im| > epsilon here
  ThresholdMethod method = ThresholdMethod::scan_bisect;
  // Strength-zero values of the two eigenvalue traces that first coalesce and
  // turn complex.  NaN when not traced (open ray, or tracing disabled).
  std::array<Real, 2> participating_levels{std::numeric_limits<Real>::quiet_NaN(),
                                           std::numeric_limits<Real>::quiet_NaN()};
  int cutoff_M = 0;
  bool open = false;         // no crossing found: PT-symmetric up to the ceiling
  bool non_monotone = false; // refinement aborted; bracket left at coarse width
};

template <class Real = double>
struct FlowTrace {
  std::vector<Real> beta_grid;                           // ascending, starts at 0
  std::vector<std::vector<std::complex<Real>>> levels;   // [grid point][trace]
  std::vector<int> ambiguous;                            // grid indices with matching ties
  int cutoff_M = 0;
};

template <class Real = double>
struct MergeEvent {
  Real beta = 0;             // grid value where traces first turn complex
  std::vector<Real> levels;  // strength-zero labels, deduplicated and sorted
};

template <class Real = double>
struct ThresholdOptions {
  Real resolution = Real(1e-4);
  Real epsilon = Real(1e-8);   // imaginary-part detection floor
  Real ceiling = 0;            // 0: 2.5 * analytic_2x2(scanned order)
  Real stride = 0;             // 0: contract default (see find_threshold)
  Real direction = 1;          // applied strength is direction * s, s >= 0
  int workers = 1;
  bool trace_levels = true;    // identify the merging pair via a forward flow
};

// The 2x2 restriction to m = +-(n +- 1)/2 ... the coupled pair straddling the
// gain-loss order has eigenvalues (n^2+1)/4 +- sqrt(n^2 - beta^2)/2, which
// coalesce at beta = n.
template <class Real = double>
Real analytic_2x2(int n) {
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("analytic_2x2 needs odd n >= 1");
  return Real(n);
}

// The 3x3 restriction to m in {-1,0,1} for n=1 splits into an odd level
// pinned at 1 and an even 2x2 block with eigenvalues (1 +- sqrt(1-2beta^2))/2,
// degenerate at beta = 1/sqrt(2).
template <class Real = double>
Real analytic_3x3(int n = 1) {
  if (n != 1) throw std::invalid_argument("analytic_3x3 is defined for n = 1 only");
  return Real(1) / std::sqrt(Real(2));
}

// Traces the k_levels smallest-Re eigenvalues from strength 0 to beta_max.
// Consecutive grid points are linked by greedy nearest-neighbour assignment
// in the complex plane (globally smallest distance first).  A tie between two
// distinct candidates (the signature of an exceptional point) is recorded in
// `ambiguous`, not fatal.
template <class Real = double>
FlowTrace<Real> flow(const PotentialSpec& base, TermRef term, Real beta_max, int steps,
                     int k_levels, int cutoff_M, int workers = 1, Real direction = 1) {
  if (steps < 2) throw std::invalid_argument("flow needs at least 2 grid points");
  if (k_levels < 2) throw std::invalid_argument("flow needs at least 2 levels");
  if (k_levels > 2 * cutoff_M + 1) throw std::invalid_argument("k_levels exceeds matrix dimension");
  if (!(beta_max > 0)) throw std::invalid_argument("beta_max must be positive");

  FlowTrace<Real> tr;
  tr.cutoff_M = cutoff_M;
  tr.beta_grid.resize(size_t(steps));
  for (int i = 0; i < steps; ++i)
    tr.beta_grid[size_t(i)] = beta_max * Real(i) / Real(steps - 1);

  std::vector<std::vector<std::complex<Real>>> spectra(static_cast<size_t>(steps));
  parallel_for(size_t(steps), workers, [&](size_t i) {
    auto op = build<Real>(with_strength(base, term, double(direction * tr.beta_grid[i])), cutoff_M);
    spectra[i] = eigvals<Real>(op).eigenvalues;
  });

  tr.levels.assign(size_t(steps), {});
  tr.levels[0].assign(spectra[0].begin(), spectra[0].begin() + k_levels);

  struct Pair { Real d; int t, c; };
  for (int i = 1; i < steps; ++i) {
    const auto& prev = tr.levels[size_t(i - 1)];
    const auto& cand = spectra[size_t(i)];
    std::vector<Pair> pairs;
    pairs.reserve(size_t(k_levels) * cand.size());
    for (int t = 0; t < k_levels; ++t)
      for (int c = 0; c < int(cand.size()); ++c)
        pairs.push_back({std::abs(cand[size_t(c)] - prev[size_t(t)]), t, c});
    std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
      if (x.d != y.d) return x.d < y.d;
      if (x.t != y.t) return x.t < y.t;
      return x.c < y.c;
    });
    std::vector<int> pick(size_t(k_levels), -1);
    std::vector<bool> used(cand.size(), false);
    int assigned = 0;
    for (const auto& p : pairs) {
      if (assigned == k_levels) break;
      if (pick[size_t(p.t)] >= 0 || used[size_t(p.c)]) continue;
      pick[size_t(p.t)] = p.c;
      used[size_t(p.c)] = true;
      ++assigned;
    }
    tr.levels[size_t(i)].resize(size_t(k_levels));
    bool tie = false;
    for (int t = 0; t < k_levels; ++t) {
      const auto chosen = cand[size_t(pick[size_t(t)])];
      tr.levels[size_t(i)][size_t(t)] = chosen;
      const Real d1 = std::abs(chosen - prev[size_t(t)]);
      for (int c = 0; c < int(cand.size()); ++c) {
        if (c == pick[size_t(t)]) continue;
        const auto alt = cand[size_t(c)];
        if (std::abs(alt - chosen) <= Real(1e-6) * std::max(Real(1), std::abs(chosen)))
          continue; // same value to working precision; the choice is immaterial
        if (std::abs(alt - prev[size_t(t)]) - d1 <= Real(1e-9) * std::max(Real(1), std::abs(prev[size_t(t)]))) {
          tie = true;
          break;
        }
      }
    }
    if (tie) tr.ambiguous.push_back(i);
  }
  return tr;
}

// Groups traces by the grid index at which |Im| first exceeds epsilon.
// Exact mirror-degenerate copies within an event collapse to one label.
template <class Real = double>
std::vector<MergeEvent<Real>> merge_events(const FlowTrace<Real>& tr, Real epsilon = Real(1e-8)) {
  const int steps = int(tr.beta_grid.size());
  const int k = tr.levels.empty() ? 0 : int(tr.levels[0].size());
  std::map<int, std::vector<int>> onset;
  for (int t = 0; t < k; ++t)
    for (int i = 0; i < steps; ++i)
      if (std::abs(tr.levels[size_t(i)][size_t(t)].imag()) > epsilon) {
        onset[i].push_back(t);
        break;
      }
  std::vector<MergeEvent<Real>> out;
  for (const auto& [i, traces] : onset) {
    MergeEvent<Real> e;
    e.beta = tr.beta_grid[size_t(i)];
    std::vector<Real> labels;
    for (int t : traces) labels.push_back(tr.levels[0][size_t(t)].real());
    std::sort(labels.begin(), labels.end());
    for (Real v : labels)
      if (e.levels.empty() || v - e.levels.back() > Real(1e-6) * std::max(Real(1), std::abs(v)))
        e.levels.push_back(v);
    out.push_back(std::move(e));
  }
  return out;
}

namespace detail {

inline bool single_gain_loss_ray(const PotentialSpec& base, TermRef term) {
  if (term.hermitian) return false;
  for (const auto& t : base.gain_loss)
    if (t.order_n != term.order && t.strength_beta != 0) return false;
  for (const auto& t : base.hermitian)
    if (t.strength_lambda != 0) return false;
  return true;
}

} // namespace detail

// Locates the FIRST strength s > 0 along the ray where max |Im| crosses
// epsilon.  Stride: 0.05 * analytic_2x2(n) on a single gain-loss ray, else
// 0.05 * ceiling.  Bisection refines the coarse bracket to `resolution`; a
// midpoint whose max |Im| spikes past twice the upper endpoint's value marks
// non-monotone behaviour inside the bracket and stops refinement.
template <class Real = double>
ThresholdResult<Real> find_threshold(const PotentialSpec& base, TermRef term, int cutoff_M,
                                     const ThresholdOptions<Real>& opt = {}) {
  if (!(opt.resolution > 0) || !(opt.epsilon > 0))
    throw std::invalid_argument("resolution and epsilon must be positive");
  Real ceiling = opt.ceiling;
  if (!(ceiling > 0)) {
    if (term.hermitian)
      throw std::invalid_argument("scan ceiling required when scanning a Hermitian strength");
    ceiling = Real(2.5) * analytic_2x2<Real>(term.order);
  }
  Real stride = opt.stride;
  if (!(stride > 0))
    stride = detail::single_gain_loss_ray(base, term)
                 ? Real(0.05) * analytic_2x2<Real>(term.order)
                 : Real(0.05) * ceiling;

  auto f = [&](Real s) {
    auto op = build<Real>(with_strength(base, term, double(opt.direction * s)), cutoff_M);
    return eigvals<Real>(op).max_imag;
  };

  const int npts = int(std::ceil(double(ceiling / stride))) + 1;
  std::vector<Real> grid(static_cast<size_t>(npts)), val(static_cast<size_t>(npts));
  for (int i = 0; i < npts; ++i) grid[size_t(i)] = std::min(Real(i) * stride, ceiling);
  parallel_for(size_t(npts), opt.workers, [&](size_t i) { val[i] = f(grid[i]); });

  ThresholdResult<Real> r;
  r.cutoff_M = cutoff_M;

  int first = -1;
  for (int i = 0; i < npts; ++i)
    if (val[size_t(i)] > opt.epsilon) {
      first = i;
      break;
    }
  if (first == 0) throw std::runtime_error("ray origin is already PT-broken");
  if (first < 0) {
    r.open = true;
    r.beta_c = ceiling;
    r.bracket_lo = r.bracket_hi = ceiling;
    return r;
  }

  Real lo = grid[size_t(first - 1)], hi = grid[size_t(first)];
  Real f_hi = val[size_t(first)];
  const Real lo0 = lo, hi0 = hi;
  while (hi - lo > opt.resolution) {
    const Real mid = (lo + hi) / 2;
    const Real fm = f(mid);
    if (fm > 2 * f_hi + 10 * opt.epsilon) {
      r.non_monotone = true;
      lo = lo0;
      hi = hi0;
      break;
    }
    if (fm > opt.epsilon) {
      hi = mid;
      f_hi = fm;
    } else {
      lo = mid;
    }
  }
  r.bracket_lo = lo;
  r.bracket_hi = hi;
  r.beta_c = hi;

  if (opt.trace_levels) {
    // Forward flow to the bracket top.  Reading the labels off the traces
    // that first turn complex is robust against the exact mirror degeneracy
    // of the n >= 3 coupling chains, where tracing a conjugate pair backwards
    // can land on one doubly-degenerate branch twice.
    const int k = std::min(2 * cutoff_M + 1, 2 * std::max(term.order, 1) + 3);
    auto tr = flow<Real>(base, term, r.bracket_hi, 160, k, cutoff_M, opt.workers, opt.direction);
    auto ev = merge_events<Real>(tr, opt.epsilon);
    if (!ev.empty() && ev.front().levels.size() >= 2)
      r.participating_levels = {ev.front().levels[0], ev.front().levels[1]};
  }
  return r;
}

// Threshold error Delta_n = |beta_nc - n| for an ascending list of odd orders.
template <class Real = double>
std::vector<std::pair<int, Real>> delta_n(const std::vector<int>& n_list, int cutoff_M,
                                          const ThresholdOptions<Real>& opt = {}) {
  int prev = 0;
  for (int n : n_list) {
    if (n < 1 || n % 2 == 0 || n <= prev)
      throw std::invalid_argument("delta_n needs ascending odd orders >= 1");
    prev = n;
  }
  std::vector<std::pair<int, Real>> out;
  out.reserve(n_list.size());
  for (int n : n_list) {
    auto o = opt;
    o.trace_levels = false;
    const auto r = find_threshold<Real>(PotentialSpec{}, TermRef{false, n}, cutoff_M, o);
    out.emplace_back(n, std::abs(r.beta_c - Real(n)));
  }
  return out;
}

} // namespace ptring

#endif
