// Declarative description of the potential: a sum of gain-loss terms
// V_n = -i beta_n cos(n phi)/rho^2 (n odd) and Hermitian terms
// U_p = -lambda_p cos(p phi)/rho^2 (p even).  Units hbar^2/2mu = 1.
#ifndef PTRING_POTENTIAL_HPP
#define PTRING_POTENTIAL_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptring {

struct GainLossTerm {
  int order_n = 1;          // odd, >= 1
  double strength_beta = 0; // dimensionless, either sign
};

struct HermitianTerm {
  int order_p = 2;            // even, >= 2
  double strength_lambda = 0; // dimensionless, either sign
};

struct PotentialSpec {
  std::vector<GainLossTerm> gain_loss;
  std::vector<HermitianTerm> hermitian;

  int max_order() const {
    int mo = 0;
    for (const auto& t : gain_loss) mo = std::max(mo, t.order_n);
    for (const auto& t : hermitian) mo = std::max(mo, t.order_p);
    return mo;
  }
};

inline void validate(const PotentialSpec& spec) {
  for (const auto& t : spec.gain_loss) {
    if (t.order_n < 1 || t.order_n % 2 == 0)
      throw std::invalid_argument("gain-loss order must be a positive odd integer, got " +
                                  std::to_string(t.order_n));
    if (!std::isfinite(t.strength_beta))
      throw std::invalid_argument("gain-loss strength must be finite");
  }
  for (const auto& t : spec.hermitian) {
    if (t.order_p < 2 || t.order_p % 2 != 0)
      throw std::invalid_argument("Hermitian order must be a positive even integer, got " +
                                  std::to_string(t.order_p));
    if (!std::isfinite(t.strength_lambda))
      throw std::invalid_argument("Hermitian strength must be finite");
  }
}

// Merge duplicate orders by summing strengths; drop nothing else.
inline PotentialSpec normalized(const PotentialSpec& spec) {
  validate(spec);
  std::map<int, double> gl, hm;
  for (const auto& t : spec.gain_loss) gl[t.order_n] += t.strength_beta;
  for (const auto& t : spec.hermitian) hm[t.order_p] += t.strength_lambda;
  PotentialSpec out;
  for (const auto& [n, b] : gl) out.gain_loss.push_back({n, b});
  for (const auto& [p, l] : hm) out.hermitian.push_back({p, l});
  return out;
}

// Handle for "the strength of one term" so rays and axes can be described
// without copying spec-mutation logic around.
struct TermRef {
  bool hermitian = false; // false: gain-loss v:<n>, true: Hermitian u:<p>
  int order = 1;
};

inline PotentialSpec with_strength(PotentialSpec base, TermRef term, double s) {
  if (term.hermitian) {
    for (auto& t : base.hermitian)
      if (t.order_p == term.order) {
        t.strength_lambda = s;
        return base;
      }
    base.hermitian.push_back({term.order, s});
  } else {
    for (auto& t : base.gain_loss)
      if (t.order_n == term.order) {
        t.strength_beta = s;
        return base;
      }
    base.gain_loss.push_back({term.order, s});
  }
  return base;
}

inline std::string term_label(TermRef t) {
  return (t.hermitian ? "u:" : "v:") + std::to_string(t.order);
}

// Parse "v:<n>" / "u:<p>".
inline TermRef parse_term(const std::string& s) {
  if (s.size() < 3 || s[1] != ':' || (s[0] != 'v' && s[0] != 'u'))
    throw std::invalid_argument("term must look like v:<n> or u:<p>, got '" + s + "'");
  TermRef t;
  t.hermitian = (s[0] == 'u');
  t.order = std::stoi(s.substr(2));
  PotentialSpec probe;
  if (t.hermitian)
    probe.hermitian.push_back({t.order, 0.0});
  else
    probe.gain_loss.push_back({t.order, 0.0});
  validate(probe);
  return t;
}

} // namespace ptring

#endif
