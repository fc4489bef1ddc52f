// Serialization layer: CSV writers for every artifact (single header line,
// fixed %.12g formatting, no timestamps), the JSON potential-spec schema,
// run configuration with config hashing, and JSON metadata headers.
#ifndef PTRING_IO_HPP
#define PTRING_IO_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ptring/bessel.hpp"
#include "ptring/field.hpp"
#include "ptring/parallel.hpp"
#include "ptring/phasemap.hpp"
#include "ptring/potential.hpp"
#include "ptring/spectrum.hpp"
#include "ptring/threshold.hpp"

namespace ptring::io {

using nlohmann::json;

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

// ---- potential spec JSON (stable schema) ----

inline json spec_to_json(const PotentialSpec& spec, int cutoff_M) {
  json j;
  j["gain_loss"] = json::array();
  for (const auto& t : spec.gain_loss)
    j["gain_loss"].push_back({{"n", t.order_n}, {"beta", t.strength_beta}});
  j["hermitian"] = json::array();
  for (const auto& t : spec.hermitian)
    j["hermitian"].push_back({{"p", t.order_p}, {"lambda", t.strength_lambda}});
  j["cutoff_M"] = cutoff_M;
  return j;
}

inline std::pair<PotentialSpec, int> spec_from_json(const json& j) {
  PotentialSpec spec;
  for (const auto& t : j.value("gain_loss", json::array()))
    spec.gain_loss.push_back({t.at("n").get<int>(), t.at("beta").get<double>()});
  for (const auto& t : j.value("hermitian", json::array()))
    spec.hermitian.push_back({t.at("p").get<int>(), t.at("lambda").get<double>()});
  const int cutoff_M = j.value("cutoff_M", 100);
  validate(spec);
  return {spec, cutoff_M};
}

// ---- run configuration ----

struct RunConfig {
  PotentialSpec spec;
  int cutoff_M = 100;
  double resolution = 1e-4;
  int grid_n1 = 101, grid_n2 = 101;
  double a_ratio = 0;
  std::string output_dir = ".";
  int workers = default_workers();
};

inline json config_to_json(const RunConfig& c) {
  json j = spec_to_json(c.spec, c.cutoff_M);
  j["resolution"] = c.resolution;
  j["grid"] = {c.grid_n1, c.grid_n2};
  j["a_ratio"] = c.a_ratio;
  return j; // output_dir and workers never enter artifacts or the hash
}

// FNV-1a over the canonical (sorted-key) JSON dump.  Worker count and output
// location are excluded so reruns at different parallelism hash identically.
inline std::string config_hash(const RunConfig& c) {
  const std::string dump = config_to_json(c).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---- CSV writers ----

template <class Real>
void write_spectrum_csv(std::ostream& out, const Spectrum<Real>& s) {
  out << "index,re,im\n";
  for (size_t i = 0; i < s.eigenvalues.size(); ++i)
    out << i << ',' << format_real(double(s.eigenvalues[i].real())) << ','
        << format_real(double(s.eigenvalues[i].imag())) << '\n';
}

template <class Real>
void write_eigenvectors_csv(std::ostream& out, const Spectrum<Real>& s) {
  if (!s.eigenvectors) throw std::invalid_argument("spectrum carries no eigenvectors");
  out << "index,m,c_re,c_im\n";
  const auto& v = *s.eigenvectors;
  const int M = (int(v.rows()) - 1) / 2;
  for (Eigen::Index j = 0; j < v.cols(); ++j)
    for (Eigen::Index i = 0; i < v.rows(); ++i)
      out << j << ',' << (int(i) - M) << ',' << format_real(double(v(i, j).real())) << ','
          << format_real(double(v(i, j).imag())) << '\n';
}

template <class Real>
void write_flow_csv(std::ostream& out, const FlowTrace<Real>& tr) {
  out << "beta,level_index,re,im\n";
  for (size_t i = 0; i < tr.beta_grid.size(); ++i)
    for (size_t t = 0; t < tr.levels[i].size(); ++t)
      out << format_real(double(tr.beta_grid[i])) << ',' << t << ','
          << format_real(double(tr.levels[i][t].real())) << ','
          << format_real(double(tr.levels[i][t].imag())) << '\n';
}

template <class Real>
void write_phasemap_csv(std::ostream& out, const PhaseMap<Real>& map) {
  out << "s1,s2,max_imag\n";
  for (size_t i = 0; i < map.axis1.strengths.size(); ++i)
    for (size_t j = 0; j < map.axis2.strengths.size(); ++j)
      out << format_real(double(map.axis1.strengths[i])) << ','
          << format_real(double(map.axis2.strengths[j])) << ','
          << format_real(double(map.values(Eigen::Index(i), Eigen::Index(j)))) << '\n';
}

// gnuplot nonuniform-matrix layout: first row holds the axis2 strengths,
// each following row an axis1 strength and its values.
template <class Real>
void write_phasemap_matrix(std::ostream& out, const PhaseMap<Real>& map) {
  const size_t n2 = map.axis2.strengths.size();
  out << n2;
  for (size_t j = 0; j < n2; ++j) out << ' ' << format_real(double(map.axis2.strengths[j]));
  out << '\n';
  for (size_t i = 0; i < map.axis1.strengths.size(); ++i) {
    out << format_real(double(map.axis1.strengths[i]));
    for (size_t j = 0; j < n2; ++j)
      out << ' ' << format_real(double(map.values(Eigen::Index(i), Eigen::Index(j))));
    out << '\n';
  }
}

template <class Real>
void write_radial_csv(std::ostream& out, const std::vector<RadialMode<Real>>& modes) {
  out << "alpha,q,kappa,energy\n";
  for (const auto& m : modes)
    out << format_real(double(m.alpha)) << ',' << m.q << ',' << format_real(double(m.kappa))
        << ',' << format_real(double(m.energy)) << '\n';
}

template <class Real>
void write_density_csv(std::ostream& out, const DensityField<Real>& f) {
  out << "rho,phi,density\n";
  for (size_t i = 0; i < f.rho_grid.size(); ++i)
    for (size_t j = 0; j < f.phi_grid.size(); ++j)
      out << format_real(double(f.rho_grid[i])) << ',' << format_real(double(f.phi_grid[j]))
          << ',' << format_real(double(f.values(Eigen::Index(i), Eigen::Index(j)))) << '\n';
}

// ---- JSON metadata ----

template <class Real>
json threshold_to_json(const ThresholdResult<Real>& r) {
  json j;
  j["beta_c"] = double(r.beta_c);
  j["bracket"] = {double(r.bracket_lo), double(r.bracket_hi)};
  j["method"] = method_name(r.method);
  if (std::isnan(double(r.participating_levels[0])))
    j["participating_levels"] = nullptr;
  else
    j["participating_levels"] = {double(r.participating_levels[0]),
                                 double(r.participating_levels[1])};
  j["cutoff_M"] = r.cutoff_M;
  j["open"] = r.open;
  j["non_monotone"] = r.non_monotone;
  return j;
}

template <class Real>
json phasemap_header_json(const PhaseMap<Real>& map) {
  json j;
  j["axis1"] = {{"term", term_label(map.axis1.term)},
                {"min", double(map.axis1.strengths.front())},
                {"max", double(map.axis1.strengths.back())},
                {"count", map.axis1.strengths.size()}};
  j["axis2"] = {{"term", term_label(map.axis2.term)},
                {"min", double(map.axis2.strengths.front())},
                {"max", double(map.axis2.strengths.back())},
                {"count", map.axis2.strengths.size()}};
  j["cutoff_M"] = map.cutoff_M;
  if (map.normalization)
    j["normalization"] = {double((*map.normalization)[0]), double((*map.normalization)[1])};
  else
    j["normalization"] = nullptr;
  j["failures"] = map.failures;
  return j;
}

template <class Real>
json density_header_json(const DensityField<Real>& f, const PotentialSpec& spec, int cutoff_M) {
  json j;
  j["geometry"] = {{"a_ratio", double(f.geometry.a_ratio)}, {"a_outer", double(f.geometry.a_outer)}};
  j["spec"] = spec_to_json(spec, cutoff_M);
  j["grid"] = {f.rho_grid.size(), f.phi_grid.size()};
  j["mixed"] = f.mixed;
  return j;
}

} // namespace ptring::io

#endif
