#include "hsw/harness.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <numbers>
#include <set>
#include <thread>

#include "hsw/characteristics.hpp"
#include "hsw/coupling.hpp"
#include "hsw/errors.hpp"
#include "hsw/fd_hybrid.hpp"
#include "hsw/laplace_halfline.hpp"
#include "hsw/spectral_cauchy.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace hsw {

std::string to_string(IcKind k) {
  switch (k) {
    case IcKind::Gaussian: return "gaussian";
    case IcKind::Rect: return "rect";
    case IcKind::Zero: return "zero";
  }
  return "?";
}

IcKind ic_kind_from_string(const std::string& s) {
  if (s == "gaussian") return IcKind::Gaussian;
  if (s == "rect") return IcKind::Rect;
  if (s == "zero") return IcKind::Zero;
  throw ConfigError("unknown initial condition '" + s + "' (expected gaussian, rect or zero)");
}

double default_horizon(double x_max, double x0, double c) { return 0.75 * (x_max - x0) / c; }

PhysParams ExperimentConfig::params() const { return PhysParams::from_depth(h0, coupling, g); }

double ExperimentConfig::default_t_end() const { return default_horizon(x_max, ic.x0, std::sqrt(g * h0)); }

std::vector<double> ExperimentConfig::effective_snapshot_times() const {
  if (!snapshot_times.empty()) return snapshot_times;
  const double T = default_t_end();
  std::vector<double> t;
  for (int k = 1; k <= 5; ++k) t.push_back(T * k / 5.0);
  return t;
}

double ExperimentConfig::t_end() const {
  const auto t = effective_snapshot_times();
  return *std::max_element(t.begin(), t.end());
}

void ExperimentConfig::validate() const {
  if (!(h0 > 0.0) || !std::isfinite(h0)) throw ConfigError("h0 must be positive");
  if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("g must be positive");
  if (!(dx > 0.0) || !std::isfinite(dx)) throw ConfigError("dx must be positive");
  if (!(cfl > 0.0) || !std::isfinite(cfl)) throw ConfigError("cfl must be positive");
  if (!(x_min < 0.0 && x_max > 0.0)) throw ConfigError("domain must straddle x = 0");
  if (std::abs(x_min + x_max) > 1e-12 * (x_max - x_min)) throw ConfigError("domain must be symmetric about x = 0");
  const double cells = (x_max - x_min) / dx;
  if (std::abs(cells - std::round(cells)) > 1e-6) throw ConfigError("domain length must be a multiple of dx");
  if (std::abs(x_max / dx - std::round(x_max / dx)) > 1e-6) throw ConfigError("x = 0 must be a grid node");
  if (!(ic.width > 0.0)) throw ConfigError("initial condition width must be positive");
  if (!(probe >= x_min && probe <= x_max)) throw ConfigError("probe outside the domain");
  const double half = 0.5 * (x_max - x_min);
  const double c = std::sqrt(g * h0);
  for (double t : snapshot_times) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("snapshot times must be nonnegative");
    if (c * t >= half) throw ConfigError("snapshot time beyond the periodic validity window");
  }
  if (ic.kind != IcKind::Zero) {
    const double reach = ic.kind == IcKind::Gaussian ? 10.0 * ic.width : ic.width;
    if (ic.x0 + reach >= 0.0) throw ConfigError("initial data must be supported in x < 0");
    if (ic.x0 - reach <= x_min) throw ConfigError("initial data must lie inside the domain");
  }
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

namespace {

double get_number(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j, {"case", "ic", "h0", "g", "domain", "dx", "cfl", "snapshot_times", "probe", "output_dir"},
                 "config");
  ExperimentConfig c;
  try {
    if (j.contains("case")) {
      if (!j["case"].is_string()) throw ConfigError("field 'case' must be a string");
      c.coupling = coupling_case_from_string(j["case"].get<std::string>());
    }
    if (j.contains("ic")) {
      const json& ic = j["ic"];
      if (!ic.is_object()) throw ConfigError("field 'ic' must be an object");
      if (!ic.contains("type") || !ic["type"].is_string()) throw ConfigError("ic.type must be a string");
      c.ic.kind = ic_kind_from_string(ic["type"].get<std::string>());
      const char* wkey = c.ic.kind == IcKind::Rect ? "L" : "sigma";
      if (c.ic.kind == IcKind::Zero)
        reject_unknown(ic, {"type"}, "ic");
      else
        reject_unknown(ic, {"type", "x0", wkey}, "ic");
      if (ic.contains("x0")) c.ic.x0 = get_number(ic, "x0");
      if (ic.contains(wkey)) c.ic.width = get_number(ic, wkey);
    }
    if (j.contains("h0")) c.h0 = get_number(j, "h0");
    if (j.contains("g")) c.g = get_number(j, "g");
    if (j.contains("domain")) {
      const json& d = j["domain"];
      if (!d.is_array() || d.size() != 2 || !d[0].is_number() || !d[1].is_number())
        throw ConfigError("field 'domain' must be [x_min, x_max]");
      c.x_min = d[0].get<double>();
      c.x_max = d[1].get<double>();
    }
    if (j.contains("dx")) c.dx = get_number(j, "dx");
    if (j.contains("cfl")) c.cfl = get_number(j, "cfl");
    if (j.contains("snapshot_times")) {
      const json& t = j["snapshot_times"];
      if (!t.is_array()) throw ConfigError("field 'snapshot_times' must be an array");
      for (const auto& v : t) {
        if (!v.is_number()) throw ConfigError("snapshot_times entries must be numbers");
        c.snapshot_times.push_back(v.get<double>());
      }
    }
    if (j.contains("probe")) c.probe = get_number(j, "probe");
    if (j.contains("output_dir")) {
      if (!j["output_dir"].is_string()) throw ConfigError("field 'output_dir' must be a string");
      c.output_dir = j["output_dir"].get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return config_from_json(j);
}

ordered_json config_to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["case"] = to_string(cfg.coupling);
  ordered_json ic;
  ic["type"] = to_string(cfg.ic.kind);
  if (cfg.ic.kind != IcKind::Zero) {
    ic["x0"] = cfg.ic.x0;
    ic[cfg.ic.kind == IcKind::Rect ? "L" : "sigma"] = cfg.ic.width;
  }
  j["ic"] = ic;
  j["h0"] = cfg.h0;
  j["g"] = cfg.g;
  j["domain"] = {cfg.x_min, cfg.x_max};
  j["dx"] = cfg.dx;
  j["cfl"] = cfg.cfl;
  j["snapshot_times"] = cfg.snapshot_times;
  j["probe"] = cfg.probe;
  j["output_dir"] = cfg.output_dir;
  return j;
}

std::string config_hash(const ExperimentConfig& cfg) {
  // FNV-1a over the canonical dump; stable across runs and platforms.
  const std::string s = config_to_json(cfg).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return fmt::format("{:016x}", h);
}

GridPtr make_experiment_grid(const ExperimentConfig& cfg) {
  return std::make_shared<const Grid1D>(make_grid(cfg.x_min, cfg.x_max, cfg.dx, 2));
}

WaveState make_initial_state(const ExperimentConfig& cfg, GridPtr grid) {
  switch (cfg.ic.kind) {
    case IcKind::Gaussian: return gaussian_ic(grid, cfg.ic.x0, cfg.ic.width);
    case IcKind::Rect: return rect_ic(grid, cfg.ic.x0, cfg.ic.width);
    case IcKind::Zero: return zero_ic(grid);
  }
  return zero_ic(grid);
}

std::string format_number(double v) { return fmt::format("{:.17e}", v); }

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw std::invalid_argument("header and columns differ in size");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) throw std::invalid_argument("columns differ in length");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  out << '\n';
  std::string line;
  for (std::size_t r = 0; r < rows; ++r) {
    line.clear();
    for (std::size_t k = 0; k < columns.size(); ++k) {
      if (k) line += ',';
      line += format_number(columns[k][r]);
    }
    line += '\n';
    out << line;
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

namespace {

ChiProfile upstream_profile(const PhysParams& p) {
  return p.coupling == CouplingCase::BSV ? ChiProfile::AllBoussinesq : ChiProfile::AllSaintVenant;
}

// W* from the finite difference scheme: upstream operator on the whole grid,
// its x = 0 trace carried into x >= 0 by the exact downstream half-line solution.
struct FdOneWay {
  HybridRun upstream;
  std::vector<WaveState> combined;
  TimeSeries probe_trace;
};

FdOneWay fd_one_way(const WaveState& w0, const PhysParams& params, double t_end, double cfl,
                    const std::vector<double>& times, std::size_t probe) {
  const Grid1D& g = *w0.grid;
  const std::size_t origin = g.interface_index() + 1;
  HybridRunOptions o;
  o.profile = upstream_profile(params);
  o.cfl = cfl;
  o.snapshot_times = times;
  o.probe_index = origin;
  o.extra_probes = {probe};
  FdOneWay r;
  r.upstream = run_hybrid(w0, params, t_end, o);
  const TimeSeries& tr = r.upstream.trace;
  std::unique_ptr<HalfLineSolver> hl;
  if (params.mu_plus() > 0.0) hl = std::make_unique<HalfLineSolver>(tr, params, params.mu_plus(), Side::Plus);
  const std::size_t n_plus = g.size() - origin;
  for (const WaveState& up : r.upstream.snapshots) {
    WaveState w = up;
    if (hl) {
      auto [eta, u] = hl->snapshot(up.time, g.dx(), n_plus);
      for (std::size_t i = 0; i < n_plus; ++i) {
        w.eta[origin + i] = eta[i];
        w.u[origin + i] = u[i];
      }
    } else {
      const WaveState down = sv_halfline_state(tr, w0.grid, up.time, Side::Plus, params);
      for (std::size_t i = origin; i < g.size(); ++i) {
        w.eta[i] = down.eta[i];
        w.u[i] = down.u[i];
      }
    }
    r.combined.push_back(std::move(w));
  }
  const double xp = g.x(probe);
  if (xp < 0.0) {
    r.probe_trace = r.upstream.extra_traces.front();
  } else if (hl) {
    r.probe_trace = hl->probe(xp).u;
  } else {
    r.probe_trace = tr;
    for (std::size_t n = 0; n < tr.size(); ++n) r.probe_trace.values[n] = sv_halfline(tr, xp, tr.time(n), Side::Plus, params).second;
  }
  r.probe_trace.location = xp;
  return r;
}

TimeSeries resample(const TimeSeries& src, const TimeSeries& axis) {
  TimeSeries out = axis;
  for (std::size_t n = 0; n < axis.size(); ++n) out.values[n] = src.sample(axis.time(n));
  return out;
}

TimeSeries side_trace(const InterfaceSolution& s, double x) {
  return x < 0.0 ? s.upstream_trace_u(x) : s.downstream_trace_u(x);
}

double region_l2(const std::vector<double>& a, const std::vector<double>& b, const Grid1D& g, bool minus_only) {
  double s = 0.0;
  for (std::size_t i = g.first_interior(); i <= g.last_interior(); ++i) {
    if (minus_only && g.x(i) >= 0.0) continue;
    const double d = a[i] - (b.empty() ? 0.0 : b[i]);
    s += d * d;
  }
  return std::sqrt(s * g.dx());
}

}  // namespace

BundleSummary run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const PhysParams params = cfg.params();
  GridPtr grid = make_experiment_grid(cfg);
  const Grid1D& g = *grid;
  const WaveState w0 = make_initial_state(cfg, grid);
  const std::vector<double> times = cfg.effective_snapshot_times();
  const double T = *std::max_element(times.begin(), times.end());
  const std::size_t probe = g.nearest(cfg.probe);
  const double xp = g.x(probe);

  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  BundleSummary summary;
  try {
    HybridRunOptions ho;
    ho.profile = ChiProfile::Hybrid;
    ho.cfl = cfg.cfl;
    ho.snapshot_times = times;
    ho.probe_index = probe;
    const HybridRun hyb = run_hybrid(w0, params, T, ho);
    const FdOneWay ow = fd_one_way(w0, params, T, cfg.cfl, times, probe);

    const InterfaceSolution hyb_a(combine(w0, reflected_ic(w0, params)), params, T, true);
    const InterfaceSolution ow_a(w0, params, T, true);

    double meas2 = 0.0, pred2 = 0.0, diff2 = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      const WaveState& h = hyb.snapshots[k];
      const WaveState& o = ow.combined[k];
      const WaveState pred = combine(hyb_a.at(h.time), ow_a.at(h.time), -1.0);
      std::vector<std::vector<double>> cols(7);
      for (std::size_t i = g.first_interior(); i <= g.last_interior(); ++i) {
        cols[0].push_back(g.x(i));
        cols[1].push_back(h.u[i]);
        cols[2].push_back(h.eta[i]);
        cols[3].push_back(o.u[i]);
        cols[4].push_back(o.eta[i]);
        cols[5].push_back(pred.u[i]);
        cols[6].push_back(h.u[i] - o.u[i]);
      }
      const fs::path f = dir / fmt::format("snapshot_{:02d}.csv", k);
      write_csv(f, {"x", "u_hybrid", "eta_hybrid", "u_oneway", "eta_oneway", "u_prime_predicted", "u_prime_measured"},
                cols);
      summary.files.push_back(f);
      summary.snapshot_times.push_back(h.time);
      std::vector<double> meas(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) meas[i] = h.u[i] - o.u[i];
      const double m = region_l2(meas, {}, g, true), p = region_l2(pred.u, {}, g, true),
                   d = region_l2(meas, pred.u, g, true);
      meas2 += m * m;
      pred2 += p * p;
      diff2 += d * d;
    }
    summary.u_prime_measured_l2 = std::sqrt(meas2);
    summary.u_prime_predicted_l2 = std::sqrt(pred2);
    summary.relative_discrepancy = pred2 > 0.0 ? std::sqrt(diff2 / pred2) : std::sqrt(diff2);

    {
      const TimeSeries& th = hyb.trace;
      const TimeSeries to = resample(ow.probe_trace, th);
      const TimeSeries ph = resample(side_trace(hyb_a, xp), th);
      const TimeSeries po = resample(side_trace(ow_a, xp), th);
      std::vector<std::vector<double>> cols(5);
      for (std::size_t n = 0; n < th.size(); ++n) {
        cols[0].push_back(th.time(n));
        cols[1].push_back(th.values[n]);
        cols[2].push_back(to.values[n]);
        cols[3].push_back(th.values[n] - to.values[n]);
        cols[4].push_back(ph.values[n] - po.values[n]);
      }
      const fs::path f = dir / "trace.csv";
      write_csv(f, {"t", "u_hybrid", "u_oneway", "u_prime_measured", "u_prime_predicted"}, cols);
      summary.files.push_back(f);
    }
    {
      const SpectralField s = snapshot_spectrum(w0);
      // Continuous transform (1/2pi) int f exp(-i k x) dx approximated by the grid sum.
      const double scale = static_cast<double>(s.n()) * g.dx() / (2.0 * std::numbers::pi);
      std::vector<std::vector<double>> cols(3);
      for (std::size_t k = 0; k <= s.n() / 2; ++k) {
        const double kk = std::abs(s.kappa[k]);
        cols[0].push_back(kk);
        cols[1].push_back(scale * std::sqrt(std::norm(s.eta_hat[k]) + std::norm(s.u_hat[k])));
        cols[2].push_back(reflection_filter_modulus(kk, params.mu, params.coupling));
      }
      const fs::path f = dir / "spectrum.csv";
      write_csv(f, {"kappa", "w0_hat_abs", "r_abs"}, cols);
      summary.files.push_back(f);
    }
    {
      ordered_json m;
      m["version"] = kVersion;
      m["config_hash"] = config_hash(cfg);
      m["config"] = config_to_json(cfg);
      m["snapshot_times"] = summary.snapshot_times;
      std::vector<std::string> snaps;
      for (std::size_t k = 0; k < times.size(); ++k) snaps.push_back(summary.files[k].filename().string());
      m["snapshots"] = snaps;
      m["trace"] = "trace.csv";
      m["spectrum"] = "spectrum.csv";
      m["fd"] = {{"dt", hyb.dt}, {"steps", hyb.steps}, {"probe_x", xp}};
      m["analytic"] = {{"trace_dt", analytic_time_step(g, params)}, {"laplace_pad_factor", 20},
                       {"laplace_sigma_rule", "3 ln(10) / T_padded"}};
      m["tolerances"] = {{"reflection_relative_l2", 0.05}, {"spectral_imaginary_residue", 1e-6},
                         {"support_mass_reject", 1e-8}, {"support_mass_warn", 1e-12}};
      m["summary"] = {{"u_prime_measured_l2_minus", summary.u_prime_measured_l2},
                      {"u_prime_predicted_l2_minus", summary.u_prime_predicted_l2},
                      {"relative_discrepancy_minus", summary.relative_discrepancy}};
      const fs::path f = dir / "manifest.json";
      std::ofstream out(f);
      out << m.dump(2) << '\n';
      if (!out) throw std::runtime_error("cannot write manifest");
      summary.files.push_back(f);
    }
  } catch (...) {
    for (const auto& f : summary.files) {
      std::error_code ec;
      fs::remove(f, ec);
    }
    throw;
  }
  return summary;
}

// ---- convergence ---------------------------------------------------------

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw FitError("power law fit needs at least two matching points");
  const std::size_t n = x.size();
  double sx = 0, sy = 0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw FitError("power law fit needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw FitError("power law fit needs distinct abscissae");
  PowerLawFit f;
  f.exponent = sxy / sxx;
  f.prefactor = std::exp(my - f.exponent * mx);
  f.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

void regression_self_test() {
  std::vector<double> mu, e;
  for (double p = -6.0; p <= -2.0 + 1e-12; p += 0.5) {
    mu.push_back(std::pow(10.0, p));
    e.push_back(mu.back() * mu.back());
  }
  const PowerLawFit f = fit_power_law(mu, e);
  if (std::abs(f.exponent - 2.0) > 1e-10 || std::abs(f.r_squared - 1.0) > 1e-10)
    throw FitError(fmt::format("regression self test failed: p = {:.15f}", f.exponent));
}

std::vector<double> desk_sweep() {
  std::vector<double> h;
  for (int k = 0; k <= 6; ++k) h.push_back(std::pow(10.0, -4.5 + 0.5 * k));
  return h;
}

std::vector<double> full_sweep() {
  std::vector<double> h;
  for (int k = 0; k <= 8; ++k) h.push_back(std::pow(10.0, -6.0 + 0.5 * k));
  return h;
}

namespace {

struct SweepSetup {
  GridPtr grid;
  WaveState w0;
  PhysParams params;
  double t_end;
};

SweepSetup sweep_setup(CouplingCase coupling, const IcSpec& ic, double h0, double dx) {
  ExperimentConfig cfg;
  cfg.coupling = coupling;
  cfg.ic = ic;
  cfg.h0 = h0;
  cfg.dx = dx;
  cfg.validate();
  SweepSetup s{make_experiment_grid(cfg), {}, cfg.params(), cfg.default_t_end()};
  s.w0 = make_initial_state(cfg, s.grid);
  return s;
}

}  // namespace

double coupling_error_at_interface(CouplingCase coupling, const IcSpec& ic, double h0, double dx) {
  const SweepSetup s = sweep_setup(coupling, ic, h0, dx);
  const TimeSeries up = reflection_trace(s.w0, s.params, s.t_end);
  return std::sqrt(s.params.wave_speed()) * l2_norm(up);
}

double coupling_error_at_interface_fd(CouplingCase coupling, const IcSpec& ic, double h0, double dx, double cfl) {
  const SweepSetup s = sweep_setup(coupling, ic, h0, dx);
  HybridRunOptions o;
  o.cfl = cfl;
  o.profile = ChiProfile::Hybrid;
  const HybridRun hyb = run_hybrid(s.w0, s.params, s.t_end, o);
  o.profile = upstream_profile(s.params);
  const HybridRun ow = run_hybrid(s.w0, s.params, s.t_end, o);
  return std::sqrt(s.params.wave_speed()) * l2_diff(hyb.trace, ow.trace);
}

ConvergenceReport convergence_study(CouplingCase coupling, IcKind ic, const std::vector<double>& h0_list,
                                    const ConvergenceOptions& opts) {
  regression_self_test();
  if (h0_list.size() < 4) throw ConfigError("a convergence study needs at least four sweep points");
  if (ic == IcKind::Zero) throw ConfigError("convergence study needs a nonzero initial condition");
  const auto start = std::chrono::steady_clock::now();
  ConvergenceReport r;
  r.coupling = coupling;
  r.ic = ic;
  r.dx = opts.dx;
  r.h0_values = h0_list;
  IcSpec spec;
  spec.kind = ic;
  unsigned workers = opts.workers ? opts.workers : std::max(1u, std::thread::hardware_concurrency());
  r.error_norms.assign(h0_list.size(), 0.0);
  for (std::size_t i = 0; i < h0_list.size(); i += workers) {
    std::vector<std::future<double>> batch;
    for (std::size_t k = i; k < std::min(h0_list.size(), i + workers); ++k)
      batch.push_back(std::async(std::launch::async, coupling_error_at_interface, coupling, spec, h0_list[k], opts.dx));
    for (std::size_t k = 0; k < batch.size(); ++k) r.error_norms[i + k] = batch[k].get();
  }
  for (double h : h0_list) r.mu_values.push_back(h / std::numbers::sqrt3);
  r.fit = fit_power_law(r.mu_values, r.error_norms);

  std::vector<std::size_t> order(h0_list.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return h0_list[a] > h0_list[b]; });
  for (std::size_t k = 0; k < std::min(opts.fd_checks, order.size()); ++k) {
    const std::size_t idx = order[k];
    FdCrossCheck c;
    c.h0 = h0_list[idx];
    c.analytic = r.error_norms[idx];
    c.fd = coupling_error_at_interface_fd(coupling, spec, c.h0, opts.dx, 0.15);
    c.relative_difference = std::abs(c.fd - c.analytic) / c.analytic;
    r.fd_checks.push_back(c);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!(r.fit.r_squared >= opts.min_r_squared))
    throw FitError(fmt::format("log-log fit rejected: r^2 = {:.6f} < {:.2f} (p = {:.4f})", r.fit.r_squared,
                               opts.min_r_squared, r.fit.exponent));
  return r;
}

ordered_json report_to_json(const ConvergenceReport& r) {
  ordered_json j;
  j["case"] = to_string(r.coupling);
  j["ic"] = to_string(r.ic);
  j["dx"] = r.dx;
  j["h0"] = r.h0_values;
  j["mu"] = r.mu_values;
  j["error_norms"] = r.error_norms;
  j["exponent"] = r.fit.exponent;
  j["prefactor"] = r.fit.prefactor;
  j["r_squared"] = r.fit.r_squared;
  ordered_json fd = ordered_json::array();
  for (const auto& c : r.fd_checks)
    fd.push_back({{"h0", c.h0}, {"analytic", c.analytic}, {"fd", c.fd}, {"relative_difference", c.relative_difference}});
  j["fd_checks"] = fd;
  j["seconds"] = r.seconds;
  return j;
}

// ---- comparison ----------------------------------------------------------

namespace {

double rel_l2(const WaveState& a, const WaveState& b, const PhysParams& p, Region region) {
  const double d = coupling_error_norm({a}, {b}, region, p);
  WaveState z(b.grid, b.time);
  const double n = coupling_error_norm({b}, {z}, region, p);
  return n > 0.0 ? d / n : d;
}

}  // namespace

std::vector<ComparisonRow> compare_solvers(const ExperimentConfig& cfg) {
  cfg.validate();
  const PhysParams params = cfg.params();
  const PhysParams sv = params.with_mu(0.0);
  GridPtr grid = make_experiment_grid(cfg);
  const Grid1D& g = *grid;
  const WaveState w0 = make_initial_state(cfg, grid);
  const double T = cfg.t_end();
  const double c = params.wave_speed();
  std::vector<ComparisonRow> rows;
  auto add = [&](std::string name, double d, double tol) { rows.push_back({std::move(name), d, tol, d <= tol}); };

  // Saint-Venant: whole cells of travel so that d'Alembert is exact at nodes.
  const double t_sv = std::max(1.0, std::round(T * c / g.dx())) * g.dx() / c;
  const WaveState dal = sv_cauchy_exact(w0, t_sv, sv);
  const CauchyPropagator sv_prop(w0, sv);
  add("sv_spectral_vs_dalembert", rel_l2(sv_prop.at(t_sv), dal, sv, Region::All), 1e-5);
  {
    HybridRunOptions o;
    o.profile = ChiProfile::AllSaintVenant;
    o.cfl = cfg.cfl;
    o.snapshot_times = {t_sv};
    add("sv_fd_vs_dalembert", rel_l2(run_hybrid(w0, sv, t_sv, o).snapshots[0], dal, sv, Region::All), 1e-5);
  }
  {
    const double dt = analytic_time_step(g, sv);
    const TimeSeries tr = sv_prop.trace_u(0.0, dt, analytic_sample_count(t_sv, dt));
    HalfLineSolver hl(tr, sv, 0.0, Side::Plus);
    const std::size_t origin = g.interface_index() + 1;
    auto [eta, u] = hl.snapshot(t_sv, g.dx(), g.size() - origin);
    WaveState lap(grid, t_sv);
    for (std::size_t i = 0; i < eta.size(); ++i) {
      lap.eta[origin + i] = eta[i];
      lap.u[origin + i] = u[i];
    }
    add("sv_laplace_vs_dalembert", rel_l2(lap, dal, sv, Region::Plus), 1e-5);
    add("sv_laplace_vs_transport", rel_l2(lap, sv_halfline_state(tr, grid, t_sv, Side::Plus, sv), sv, Region::Plus),
        1e-5);
  }
  // Boussinesq everywhere.
  const CauchyPropagator b_prop(w0, params);
  const WaveState b_exact = b_prop.at(T);
  {
    HybridRunOptions o;
    o.profile = ChiProfile::AllBoussinesq;
    o.cfl = cfg.cfl;
    o.snapshot_times = {T};
    add("b_fd_vs_spectral", rel_l2(run_hybrid(w0, params, T, o).snapshots[0], b_exact, params, Region::All), 1e-3);
  }
  add("spectral_repeat", rel_l2(CauchyPropagator(w0, params).at(T), b_exact, params, Region::All), 0.0);
  // Hybrid model.
  {
    HybridRunOptions o;
    o.profile = ChiProfile::Hybrid;
    o.cfl = cfg.cfl;
    o.snapshot_times = {T};
    const WaveState fd = run_hybrid(w0, params, T, o).snapshots[0];
    const FdOneWay ow = fd_one_way(w0, params, T, cfg.cfl, {T}, g.interface_index() + 1);
    const InterfaceSolution hyb_a(combine(w0, reflected_ic(w0, params)), params, T, true);
    const InterfaceSolution ow_a(w0, params, T, true);
    add("hybrid_fd_vs_analytic", rel_l2(fd, hyb_a.at(fd.time), params, Region::All), 1e-2);
    const WaveState meas = combine(fd, ow.combined[0], -1.0);
    const WaveState pred = combine(hyb_a.at(fd.time), ow_a.at(fd.time), -1.0);
    add("reflection_measured_vs_predicted", rel_l2(meas, pred, params, Region::Minus), 5e-2);
  }
  return rows;
}

}  // namespace hsw
