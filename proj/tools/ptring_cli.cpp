// ptring: command-line surface over the angular-operator library.
// Subcommands: spectrum, threshold, flow, phasemap, density, radial.
// Exit codes: 0 success, 1 invalid input/usage, 2 solver failure,
// 3 convergence check discrepancy.
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptring/bessel.hpp"
#include "ptring/field.hpp"
#include "ptring/io.hpp"
#include "ptring/phasemap.hpp"
#include "ptring/potential.hpp"
#include "ptring/spectrum.hpp"
#include "ptring/threshold.hpp"

namespace {

using namespace ptring;
using io::json;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_solver = 2;
constexpr int exit_convergence = 3;

struct CommonArgs {
  std::string config_path;
  std::optional<int> cutoff_M;
  std::optional<int> workers;
  std::optional<double> resolution;
  std::optional<double> a_ratio;
  std::string output_dir = ".";
  int n = 1;
  std::optional<double> beta;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config_path, "JSON run configuration");
  cmd->add_option("--M", a.cutoff_M, "angular momentum cutoff");
  cmd->add_option("--workers", a.workers, "worker thread cap");
  cmd->add_option("--resolution", a.resolution, "threshold bisection resolution");
  cmd->add_option("--a-ratio", a.a_ratio, "inner/outer radius ratio (0 = disc)");
  cmd->add_option("-o,--output-dir", a.output_dir, "artifact directory");
  cmd->add_option("--n", a.n, "gain-loss order for the v:n term");
  cmd->add_option("--beta", a.beta, "gain-loss strength for the v:n term");
}

// File config first, then flag overrides.
io::RunConfig resolve(const CommonArgs& a) {
  io::RunConfig c;
  if (!a.config_path.empty()) {
    std::ifstream in(a.config_path);
    if (!in) throw std::invalid_argument("cannot read config: " + a.config_path);
    json j = json::parse(in);
    auto [spec, M] = io::spec_from_json(j);
    c.spec = std::move(spec);
    c.cutoff_M = M;
    c.resolution = j.value("resolution", c.resolution);
    if (j.contains("grid")) {
      c.grid_n1 = j["grid"].at(0).get<int>();
      c.grid_n2 = j["grid"].at(1).get<int>();
    }
    c.a_ratio = j.value("a_ratio", c.a_ratio);
  }
  if (a.cutoff_M) c.cutoff_M = *a.cutoff_M;
  if (a.workers) c.workers = *a.workers;
  if (a.resolution) c.resolution = *a.resolution;
  if (a.a_ratio) c.a_ratio = *a.a_ratio;
  c.output_dir = a.output_dir;
  if (a.beta) c.spec = with_strength(c.spec, TermRef{false, a.n}, *a.beta);
  validate(c.spec);
  if (c.workers < 1) throw std::invalid_argument("--workers must be >= 1");
  return c;
}

json header(const io::RunConfig& c) {
  json j;
  j["config_hash"] = io::config_hash(c);
  j["config"] = io::config_to_json(c);
  return j;
}

void write_json(const io::RunConfig& c, const std::string& name, const json& j) {
  auto out = io::open_out(c.output_dir + "/" + name);
  out << j.dump(2) << '\n';
}

// ---- spectrum ----

int cmd_spectrum(const io::RunConfig& c, bool check_convergence) {
  const auto s = eigvals(build(c.spec, c.cutoff_M));
  {
    auto out = io::open_out(c.output_dir + "/spectrum.csv");
    io::write_spectrum_csv(out, s);
  }
  json j = header(c);
  j["dimension"] = 2 * c.cutoff_M + 1;
  j["max_imag"] = s.max_imag;

  int code = exit_ok;
  if (check_convergence) {
    const auto s2 = eigvals(build(c.spec, 2 * c.cutoff_M));
    const int k = c.cutoff_M + 1;
    double worst = 0;
    for (int i = 0; i < k; ++i) {
      const auto a = s.eigenvalues[size_t(i)], b = s2.eigenvalues[size_t(i)];
      worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
    }
    const double tol = 1e-8;
    j["convergence"] = {{"cutoff_M_check", 2 * c.cutoff_M},
                        {"levels_compared", k},
                        {"max_rel_discrepancy", worst},
                        {"tolerance", tol},
                        {"pass", worst <= tol}};
    if (worst > tol) code = exit_convergence;
  }
  write_json(c, "spectrum.json", j);
  std::cout << "spectrum: dim " << 2 * c.cutoff_M + 1 << ", max_imag "
            << io::format_real(s.max_imag) << "\n";
  return code;
}

// ---- threshold ----

int cmd_threshold(const io::RunConfig& c, int n, const std::string& method,
                  std::optional<double> ceiling, bool check_convergence) {
  ThresholdResult<double> r;
  if (method == "2x2") {
    r.beta_c = analytic_2x2(n);
    r.bracket_lo = r.bracket_hi = r.beta_c;
    r.method = ThresholdMethod::analytic_2x2;
    const double lo = (n - 1.0) / 2, hi = (n + 1.0) / 2;
    r.participating_levels = {lo * lo, hi * hi};
  } else if (method == "3x3") {
    r.beta_c = analytic_3x3(n);
    r.bracket_lo = r.bracket_hi = r.beta_c;
    r.method = ThresholdMethod::analytic_3x3;
    r.participating_levels = {0.0, 1.0};
  } else if (method == "scan") {
    ThresholdOptions<double> opt;
    opt.resolution = c.resolution;
    opt.workers = c.workers;
    if (ceiling) opt.ceiling = *ceiling;
    r = find_threshold(c.spec, TermRef{false, n}, c.cutoff_M, opt);
  } else {
    throw std::invalid_argument("--method must be scan, 2x2 or 3x3");
  }

  json j = header(c);
  j["n"] = n;
  j["result"] = io::threshold_to_json(r);

  int code = exit_ok;
  if (check_convergence && method == "scan") {
    ThresholdOptions<double> opt;
    opt.resolution = c.resolution;
    opt.workers = c.workers;
    opt.trace_levels = false;
    if (ceiling) opt.ceiling = *ceiling;
    const auto r2 = find_threshold(c.spec, TermRef{false, n}, 2 * c.cutoff_M, opt);
    const double d = std::abs(r.beta_c - r2.beta_c);
    const double tol = 2 * c.resolution;
    j["convergence"] = {{"cutoff_M_check", 2 * c.cutoff_M},
                        {"beta_c_check", r2.beta_c},
                        {"discrepancy", d},
                        {"tolerance", tol},
                        {"pass", d <= tol}};
    if (d > tol) code = exit_convergence;
  }
  write_json(c, "threshold.json", j);
  std::cout << "threshold: beta_c " << io::format_real(r.beta_c) << " (" << method_name(r.method)
            << ")\n";
  return code;
}

// ---- flow ----

int cmd_flow(const io::RunConfig& c, int n, double beta_max, int levels, int steps) {
  const auto tr = flow(c.spec, TermRef{false, n}, beta_max, steps, levels, c.cutoff_M, c.workers);
  {
    auto out = io::open_out(c.output_dir + "/flow.csv");
    io::write_flow_csv(out, tr);
  }
  const auto ev = merge_events(tr);
  json j = header(c);
  j["n"] = n;
  j["beta_max"] = beta_max;
  j["levels"] = levels;
  j["steps"] = steps;
  j["merge_events"] = json::array();
  for (const auto& e : ev) j["merge_events"].push_back({{"beta", e.beta}, {"levels", e.levels}});
  j["ambiguous_indices"] = tr.ambiguous;
  write_json(c, "flow.json", j);
  std::cout << "flow: " << steps << " points, " << ev.size() << " merge event(s)\n";
  return exit_ok;
}

// ---- phasemap ----

int cmd_phasemap(const io::RunConfig& c, const std::string& axis1, const std::string& axis2,
                 bool normalized, double min1, double max1, double min2, double max2,
                 std::optional<int> count1, std::optional<int> count2) {
  if (!(min1 < max1) || !(min2 < max2))
    throw std::invalid_argument("empty axis range: need min < max on both axes");
  const TermRef t1 = parse_term(axis1);
  const TermRef t2 = parse_term(axis2);
  const int n1 = count1.value_or(c.grid_n1);
  const int n2 = count2.value_or(c.grid_n2);

  PhaseMap<double> map;
  if (normalized) {
    if (t1.hermitian || t2.hermitian)
      throw std::invalid_argument("--normalized needs gain-loss terms on both axes");
    map = scan_normalized(c.spec, t1, min1, max1, n1, t2, min2, max2, n2, c.cutoff_M, c.workers);
  } else {
    AxisSpec<double> a1{t1, linspace(min1, max1, n1)};
    AxisSpec<double> a2{t2, linspace(min2, max2, n2)};
    map = scan(c.spec, a1, a2, c.cutoff_M, c.workers);
  }
  {
    auto out = io::open_out(c.output_dir + "/phasemap.csv");
    io::write_phasemap_csv(out, map);
  }
  {
    auto out = io::open_out(c.output_dir + "/phasemap.matrix");
    io::write_phasemap_matrix(out, map);
  }
  json j = header(c);
  j["map"] = io::phasemap_header_json(map);
  write_json(c, "phasemap.json", j);
  std::cout << "phasemap: " << n1 << "x" << n2 << " cells, " << map.failures.size()
            << " failed\n";
  return map.failures.empty() ? exit_ok : exit_solver;
}

// ---- density ----

int cmd_density(const io::RunConfig& c, int n, std::optional<double> beta_rel, int q,
                int mode_index) {
  io::RunConfig cfg = c;
  if (beta_rel) {
    ThresholdOptions<double> opt;
    opt.resolution = cfg.resolution;
    opt.workers = cfg.workers;
    opt.trace_levels = false;
    const auto base = with_strength(cfg.spec, TermRef{false, n}, 0.0);
    const double beta_c = find_threshold(base, TermRef{false, n}, cfg.cutoff_M, opt).beta_c;
    cfg.spec = with_strength(cfg.spec, TermRef{false, n}, *beta_rel * beta_c);
  }
  validate(cfg.spec);
  const auto s = eigpairs(build(cfg.spec, cfg.cutoff_M));

  json j = header(cfg);
  j["n"] = n;
  if (max_imag(s) > 1e-8) {
    // Broken phase: the radial factor would need complex Bessel order, so the
    // deliverable is the angular gain/loss asymmetry of the amplified mode.
    int amp = 0;
    for (int i = 0; i < int(s.eigenvalues.size()); ++i)
      if (s.eigenvalues[size_t(i)].imag() > s.eigenvalues[size_t(amp)].imag()) amp = i;
    const auto mode = angular_mode(s, amp);
    const auto w = gain_loss_weights(mode, n);
    const auto phi = midpoint_phi_grid<double>(512);
    const auto prof = angular_profile(mode, phi);
    {
      auto out = io::open_out(cfg.output_dir + "/profile.csv");
      out << "phi,density\n";
      for (size_t k = 0; k < phi.size(); ++k)
        out << io::format_real(phi[k]) << ','
            << io::format_real(std::norm(prof(Eigen::Index(k)))) << '\n';
    }
    j["broken_phase"] = true;
    j["mode_index"] = amp;
    j["alpha_sq"] = {s.eigenvalues[size_t(amp)].real(), s.eigenvalues[size_t(amp)].imag()};
    j["weights"] = {{"w_gain", w.w_gain}, {"w_loss", w.w_loss}};
    write_json(cfg, "density.json", j);
    std::cout << "density: PT-broken spectrum; wrote angular profile and weights "
                 "(w_gain "
              << io::format_real(w.w_gain) << ", w_loss " << io::format_real(w.w_loss) << ")\n";
    return exit_ok;
  }

  const auto mode = angular_mode(s, mode_index);
  const double alpha = alpha_from_alpha_sq(mode.alpha_sq);
  Geometry<double> geom;
  geom.a_ratio = cfg.a_ratio;
  const auto roots = geom.a_ratio == 0 ? disc_zeros(alpha, q) : annulus_zeros(alpha, geom.a_ratio, q);
  RadialMode<double> rm;
  rm.alpha = alpha;
  rm.q = q;
  rm.kappa = roots[size_t(q - 1)] / geom.a_outer;
  rm.energy = rm.kappa * rm.kappa;
  rm.geometry = geom;

  const auto f = density(mode, rm, 256, 512);
  {
    auto out = io::open_out(cfg.output_dir + "/density.csv");
    io::write_density_csv(out, f);
  }
  j["broken_phase"] = false;
  j["mode_index"] = mode_index;
  j["field"] = io::density_header_json(f, cfg.spec, cfg.cutoff_M);
  j["alpha"] = alpha;
  j["kappa"] = rm.kappa;
  j["q"] = q;
  write_json(cfg, "density.json", j);
  std::cout << "density: mode " << mode_index << ", alpha " << io::format_real(alpha) << ", kappa "
            << io::format_real(rm.kappa) << (f.mixed ? " (single-alpha approximation)" : "")
            << "\n";
  return exit_ok;
}

// ---- radial ----

int cmd_radial(const io::RunConfig& c, double alpha, int q_max) {
  Geometry<double> geom;
  geom.a_ratio = c.a_ratio;
  const auto tab = energies<double>({alpha}, q_max, geom);
  {
    auto out = io::open_out(c.output_dir + "/radial.csv");
    io::write_radial_csv(out, tab);
  }
  json j = header(c);
  j["alpha"] = alpha;
  j["q_max"] = q_max;
  j["geometry"] = {{"a_ratio", geom.a_ratio}, {"a_outer", geom.a_outer}};
  write_json(c, "radial.json", j);
  std::cout << "radial: " << tab.size() << " modes, first kappa "
            << io::format_real(tab.front().kappa) << "\n";
  return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"PT-symmetric annulus spectral toolkit"};
  app.require_subcommand(1);

  CommonArgs sa;
  bool s_check = false;
  auto* sp = app.add_subcommand("spectrum", "eigenvalues of the angular operator");
  add_common(sp, sa);
  sp->add_flag("--check-convergence", s_check, "re-solve at 2M and compare the low levels");

  CommonArgs ta;
  std::string t_method = "scan";
  std::optional<double> t_ceiling;
  bool t_check = false;
  auto* tp = app.add_subcommand("threshold", "PT-breaking threshold along a v:n ray");
  add_common(tp, ta);
  tp->add_option("--method", t_method, "scan, 2x2 or 3x3");
  tp->add_option("--ceiling", t_ceiling, "scan ceiling override");
  tp->add_flag("--check-convergence", t_check, "re-solve at 2M and compare beta_c");

  CommonArgs fa;
  double f_beta_max = 4.0;
  int f_levels = 6, f_steps = 201;
  auto* fp = app.add_subcommand("flow", "eigenvalue traces along a v:n ray");
  add_common(fp, fa);
  fp->add_option("--beta-max", f_beta_max, "trace endpoint");
  fp->add_option("--levels", f_levels, "number of lowest levels to trace");
  fp->add_option("--steps", f_steps, "grid points from 0 to beta-max");

  CommonArgs pa;
  std::string p_axis1, p_axis2;
  bool p_normalized = false;
  double p_min1 = -1.0, p_max1 = 1.0, p_min2 = -1.0, p_max2 = 1.0;
  std::optional<int> p_count1, p_count2;
  auto* pp = app.add_subcommand("phasemap", "max |Im| over a 2D strength grid");
  add_common(pp, pa);
  pp->add_option("--axis1", p_axis1, "first axis term, v:<n> or u:<p>")->required();
  pp->add_option("--axis2", p_axis2, "second axis term, v:<n> or u:<p>")->required();
  pp->add_flag("--normalized", p_normalized, "axes in units of each term's threshold");
  pp->add_option("--min1", p_min1, "axis1 range start");
  pp->add_option("--max1", p_max1, "axis1 range end");
  pp->add_option("--min2", p_min2, "axis2 range start");
  pp->add_option("--max2", p_max2, "axis2 range end");
  pp->add_option("--count1", p_count1, "axis1 sample count");
  pp->add_option("--count2", p_count2, "axis2 sample count");

  CommonArgs da;
  std::optional<double> d_beta_rel;
  int d_q = 1, d_mode = 0;
  auto* dp = app.add_subcommand("density", "eigenstate density on the polar grid");
  add_common(dp, da);
  dp->add_option("--beta-rel", d_beta_rel, "set beta as a fraction of the v:n threshold");
  dp->add_option("--q", d_q, "radial quantum number");
  dp->add_option("--mode", d_mode, "angular mode index (sorted by Re alpha^2)");

  CommonArgs ra;
  double r_alpha = 0.0;
  int r_q = 3;
  auto* rp = app.add_subcommand("radial", "quantized radial momenta and energies");
  add_common(rp, ra);
  rp->add_option("--alpha", r_alpha, "Bessel order");
  rp->add_option("--q", r_q, "number of radial modes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_usage;
  }

  try {
    if (sp->parsed()) return cmd_spectrum(resolve(sa), s_check);
    if (tp->parsed()) return cmd_threshold(resolve(ta), ta.n, t_method, t_ceiling, t_check);
    if (fp->parsed()) return cmd_flow(resolve(fa), fa.n, f_beta_max, f_levels, f_steps);
    if (pp->parsed())
      return cmd_phasemap(resolve(pa), p_axis1, p_axis2, p_normalized, p_min1, p_max1, p_min2,
                          p_max2, p_count1, p_count2);
    if (dp->parsed()) return cmd_density(resolve(da), da.n, d_beta_rel, d_q, d_mode);
    if (rp->parsed()) return cmd_radial(resolve(ra), r_alpha, r_q);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_solver;
  }
  return exit_usage;
}
