#include "hsw/coupling.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hsw/errors.hpp"

namespace hsw {

cplx reflection_coeff(cplx s, const PhysParams& params) {
  const cplx q = s * (params.mu / params.wave_speed());
  const cplx z = q * q;
  const cplx w = std::sqrt(1.0 + z);
  const cplx d = (1.0 + w) * (1.0 + w);
  // (1 - w)/(1 + w) rewritten without the cancellation in 1 - w.
  return params.coupling == CouplingCase::BSV ? -z / d : z / d;
}

cplx reflection_coeff_direct(cplx s, const PhysParams& params) {
  const double c = params.wave_speed();
  const cplx lm = lambda_b(s, params.mu_minus(), c);
  const cplx lp = lambda_b(s, params.mu_plus(), c);
  return (lm - lp) / (lm + lp);
}

double filter_bsv(double kappa, double mu) {
  const double m2 = mu * mu * kappa * kappa;
  const double psi = std::sqrt(1.0 + m2);
  return m2 / ((psi + 1.0) * (psi + 1.0));
}

cplx filter_svb(double kappa, double mu) {
  const double m2 = mu * mu * kappa * kappa;
  const cplx root = std::sqrt(cplx(1.0 - m2, 0.0));
  return m2 / ((1.0 + root) * (1.0 + root));
}

double reflection_filter_modulus(double kappa, double mu, CouplingCase c) {
  return c == CouplingCase::BSV ? filter_bsv(kappa, mu) : std::abs(filter_svb(kappa, mu));
}

double analytic_time_step(const Grid1D& grid, const PhysParams& params) {
  return grid.dx() / (kTraceSubsteps * params.wave_speed());
}

std::size_t analytic_sample_count(double t_end, double dt) {
  return static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9)) + 1;
}

namespace {

void require_origin(const Grid1D& g) {
  if (!g.has_origin_node()) throw std::invalid_argument("grid must contain a node at x = 0");
}

std::size_t pad_cells(const Grid1D& g, const PhysParams& params, double t_end, bool pad) {
  return pad ? static_cast<std::size_t>(std::ceil(params.wave_speed() * t_end / g.dx())) + 1 : 0;
}

WaveState zero_padded(const WaveState& w, std::size_t pad) {
  if (pad == 0) return w;
  const Grid1D& g = *w.grid;
  const double ext = static_cast<double>(pad) * g.dx();
  auto pg = std::make_shared<const Grid1D>(make_grid(g.x_min() - ext, g.x_max() + ext, g.dx(), g.n_ghost()));
  WaveState out(pg, w.time);
  std::copy(w.eta.begin(), w.eta.end(), out.eta.begin() + static_cast<long>(pad));
  std::copy(w.u.begin(), w.u.end(), out.u.begin() + static_cast<long>(pad));
  return out;
}

}  // namespace

InterfaceSolution::InterfaceSolution(const WaveState& upstream_data, const PhysParams& params, double t_end,
                                     bool pad_upstream)
    : grid_(upstream_data.grid),
      params_(params),
      t_end_(t_end),
      pad_(pad_cells(*upstream_data.grid, params, t_end, pad_upstream)),
      upstream_(zero_padded(upstream_data, pad_), params.with_mu(params.mu_minus())) {
  require_origin(*grid_);
  const double dt = analytic_time_step(*grid_, params_);
  trace_ = upstream_.trace_u(0.0, dt, analytic_sample_count(t_end_, dt));
  if (params_.mu_plus() > 0.0)
    downstream_ = std::make_unique<HalfLineSolver>(trace_, params_, params_.mu_plus(), Side::Plus);
}

WaveState InterfaceSolution::upstream_at(double t) const {
  WaveState full = upstream_.at(t);
  if (pad_ == 0) return full;
  WaveState w(grid_, t);
  const auto off = static_cast<long>(pad_);
  std::copy(full.eta.begin() + off, full.eta.begin() + off + static_cast<long>(w.size()), w.eta.begin());
  std::copy(full.u.begin() + off, full.u.begin() + off + static_cast<long>(w.size()), w.u.begin());
  return w;
}

WaveState InterfaceSolution::downstream_at(double t) const {
  if (!downstream_) return sv_halfline_state(trace_, grid_, t, Side::Plus, params_);
  const std::size_t i0 = grid_->interface_index() + 1;
  const std::size_t n_plus = grid_->size() - i0;
  auto [eta, u] = downstream_->snapshot(t, grid_->dx(), n_plus);
  WaveState w(grid_, t);
  std::copy(eta.begin(), eta.end(), w.eta.begin() + static_cast<long>(i0));
  std::copy(u.begin(), u.end(), w.u.begin() + static_cast<long>(i0));
  return w;
}

WaveState InterfaceSolution::at(double t) const {
  WaveState up = upstream_at(t);
  WaveState down = downstream_at(t);
  for (std::size_t i = grid_->interface_index() + 1; i < grid_->size(); ++i) {
    up.eta[i] = down.eta[i];
    up.u[i] = down.u[i];
  }
  return up;
}

TimeSeries InterfaceSolution::upstream_trace_u(double x) const {
  return upstream_.trace_u(x, trace_.dt, trace_.size());
}

TimeSeries InterfaceSolution::downstream_trace_u(double x) const {
  if (x < 0.0) throw std::invalid_argument("downstream trace requires x >= 0");
  if (downstream_) return downstream_->probe(x).u;
  TimeSeries out = trace_;
  out.location = x;
  for (std::size_t n = 0; n < out.size(); ++n) out.values[n] = sv_halfline(trace_, x, trace_.time(n), Side::Plus, params_).second;
  return out;
}

void check_upstream_support(const WaveState& w0) {
  w0.check_consistent();
  double total = 0.0, plus = 0.0;
  for (std::size_t i = 0; i < w0.size(); ++i) {
    const double m = w0.eta[i] * w0.eta[i] + w0.u[i] * w0.u[i];
    total += m;
    if (w0.grid->x(i) > 0.0) plus += m;
  }
  if (total == 0.0 || plus <= 1e-12 * total) return;
  if (plus <= 1e-8 * total) {
    spdlog::warn("initial data has relative mass {:.2e} on x > 0", plus / total);
    return;
  }
  throw std::invalid_argument(fmt::format("initial data must be supported on x <= 0 (relative mass {:.2e} on x > 0)",
                                          plus / total));
}

OneWaySolution one_way_solve(const WaveState& w0, const PhysParams& params, const std::vector<double>& times) {
  check_upstream_support(w0);
  const double t_end = times.empty() ? 0.0 : *std::max_element(times.begin(), times.end());
  InterfaceSolution sol(w0, params, t_end, true);
  OneWaySolution out;
  out.times = times;
  out.trace = sol.trace();
  for (double t : times) {
    out.minus.push_back(sol.upstream_at(t));
    out.plus.push_back(sol.downstream_at(t));
    WaveState c = out.minus.back();
    for (std::size_t i = w0.grid->interface_index() + 1; i < c.size(); ++i) {
      c.eta[i] = out.plus.back().eta[i];
      c.u[i] = out.plus.back().u[i];
    }
    out.combined.push_back(std::move(c));
  }
  return out;
}

WaveState reflected_ic_bsv(const WaveState& w0, const PhysParams& params) {
  if (params.coupling != CouplingCase::BSV) throw std::invalid_argument("reflected_ic_bsv requires the BSV case");
  w0.check_consistent();
  const Grid1D& g = *w0.grid;
  if (!g.is_symmetric()) throw std::invalid_argument("reflection x -> -x requires a grid symmetric about 0");
  const std::size_t n = g.size();
  WaveState gr(w0.grid, w0.time);
  for (std::size_t i = 0; i < n; ++i) {
    gr.eta[i] = -w0.eta[n - 1 - i];
    gr.u[i] = w0.u[n - 1 - i];
  }
  SpectralField f = snapshot_spectrum(gr);
  for (std::size_t k = 0; k < f.n(); ++k) {
    const double r = filter_bsv(f.kappa[k], params.mu);
    f.eta_hat[k] *= r;
    f.u_hat[k] *= r;
  }
  return spectrum_to_state(f, w0.grid, w0.time);
}

TimeSeries apply_reflection_filter(const TimeSeries& trace, const PhysParams& params) {
  LaplaceSignal sig = damped_fft(trace);
  check_pole_distance(sig, params.mu, params.wave_speed());
  for (std::size_t k = 0; k < sig.size(); ++k) sig.coeffs[k] *= reflection_coeff(sig.s(k), params);
  TimeSeries out = damped_ifft(sig);
  out.t0 = trace.t0;
  out.location = trace.location;
  return out;
}

WaveState reflected_ic_svb(const WaveState& w0, const PhysParams& params) {
  if (params.coupling != CouplingCase::SVB) throw std::invalid_argument("reflected_ic_svb requires the SVB case");
  w0.check_consistent();
  const Grid1D& g = *w0.grid;
  require_origin(g);
  const double sv = params.velocity_scale();
  const double c = params.wave_speed();
  const std::size_t i0 = g.interface_index() + 1;
  const std::size_t n_plus = g.last_interior() + 1 - i0;
  SampledFunction eta0(g, w0.eta), u0(g, w0.u);
  // Right-going characteristic amplitude of the upstream data, read at x = -c t.
  std::vector<double> gv(n_plus);
  for (std::size_t i = 0; i < n_plus; ++i) {
    const double x = -g.x(i0 + i);
    gv[i] = 0.5 * (eta0(x) + sv * u0(x));
  }
  TimeSeries gt(0.0, g.dx() / c, std::move(gv));
  TimeSeries gr = apply_reflection_filter(gt, params);
  WaveState out(w0.grid, w0.time);
  for (std::size_t i = 0; i < n_plus; ++i) {
    out.u[i0 + i] = gr.values[i] / sv;
    out.eta[i0 + i] = -gr.values[i];
  }
  return out;
}

WaveState reflected_ic(const WaveState& w0, const PhysParams& params) {
  return params.coupling == CouplingCase::BSV ? reflected_ic_bsv(w0, params) : reflected_ic_svb(w0, params);
}

TimeSeries reflection_trace(const WaveState& w0, const PhysParams& params, double t_end) {
  const Grid1D& g = *w0.grid;
  const double dt = analytic_time_step(g, params);
  CauchyPropagator up(w0, params.with_mu(params.mu_minus()));
  return apply_reflection_filter(up.trace_u(0.0, dt, analytic_sample_count(t_end, dt)), params);
}

HybridAnalytic hybrid_analytic(const WaveState& w0, const PhysParams& params, const std::vector<double>& times) {
  check_upstream_support(w0);
  const double t_end = times.empty() ? 0.0 : *std::max_element(times.begin(), times.end());
  HybridAnalytic out;
  out.times = times;
  out.reflected_data = reflected_ic(w0, params);
  InterfaceSolution sol(combine(w0, out.reflected_data), params, t_end, true);
  out.trace = sol.trace();
  for (double t : times) out.snapshots.push_back(sol.at(t));
  return out;
}

InterfaceJumps coupling_jumps(const WaveState& w0, const PhysParams& params, double t_end) {
  check_upstream_support(w0);
  const WaveState data = combine(w0, reflected_ic(w0, params));
  InterfaceSolution sol(data, params, t_end);
  const double h = w0.grid->dx();
  std::array<TimeSeries, 3> um, up;
  for (int k = 0; k < 3; ++k) {
    um[k] = sol.upstream_trace_u(-(k + 1) * h);
    up[k] = sol.downstream_trace_u((k + 1) * h);
  }
  InterfaceJumps j;
  j.dx = h;
  double su = 0.0, sx = 0.0;
  const std::size_t n = sol.trace().size();
  for (std::size_t s = 0; s < n; ++s) {
    const double vm = 3.0 * um[0].values[s] - 3.0 * um[1].values[s] + um[2].values[s];
    const double vp = 3.0 * up[0].values[s] - 3.0 * up[1].values[s] + up[2].values[s];
    const double dm = (2.5 * um[0].values[s] - 4.0 * um[1].values[s] + 1.5 * um[2].values[s]) / h;
    const double dp = (-2.5 * up[0].values[s] + 4.0 * up[1].values[s] - 1.5 * up[2].values[s]) / h;
    su += (vp - vm) * (vp - vm);
    sx += (dp - dm) * (dp - dm);
  }
  const double dt = sol.trace().dt;
  j.jump_u = std::sqrt(su * dt);
  j.jump_ux = std::sqrt(sx * dt);
  j.scale_u = l2_norm(sol.trace());
  return j;
}

WaveState mirror(const WaveState& w) {
  w.check_consistent();
  if (!w.grid->is_symmetric()) throw std::invalid_argument("mirror requires a grid symmetric about 0");
  const std::size_t n = w.size();
  WaveState m(w.grid, w.time);
  for (std::size_t i = 0; i < n; ++i) {
    m.eta[i] = w.eta[n - 1 - i];
    m.u[i] = -w.u[n - 1 - i];
  }
  return m;
}

namespace {

double max_abs(const WaveState& w) {
  double m = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) m = std::max({m, std::abs(w.eta[i]), std::abs(w.u[i])});
  return m;
}

// Halves below roundoff of the full data (e.g. far Gaussian tails) are skipped.
bool negligible(const WaveState& half, double scale) { return max_abs(half) <= 1e-15 * scale; }

}  // namespace

SplitSolution split_and_superpose(const WaveState& w0, const PhysParams& params, const std::vector<double>& times) {
  w0.check_consistent();
  const Grid1D& g = *w0.grid;
  WaveState left = w0, right = w0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.x(i) >= 0.0) {
      left.eta[i] = 0.0;
      left.u[i] = 0.0;
    } else {
      right.eta[i] = 0.0;
      right.u[i] = 0.0;
    }
  }
  SplitSolution out;
  out.times = times;
  for (double t : times) {
    out.w_star.emplace_back(w0.grid, t);
    out.hybrid.emplace_back(w0.grid, t);
  }
  auto accumulate = [&](const std::vector<WaveState>& src, std::vector<WaveState>& dst, bool mirrored) {
    for (std::size_t n = 0; n < src.size(); ++n) dst[n] = combine(dst[n], mirrored ? mirror(src[n]) : src[n]);
  };
  const double scale = max_abs(w0);
  if (!negligible(left, scale)) {
    accumulate(one_way_solve(left, params, times).combined, out.w_star, false);
    accumulate(hybrid_analytic(left, params, times).snapshots, out.hybrid, false);
  }
  if (!negligible(right, scale)) {
    // The problem seen from the other side: x -> -x, u -> -u, roles swapped.
    PhysParams swapped = params;
    swapped.coupling = params.coupling == CouplingCase::BSV ? CouplingCase::SVB : CouplingCase::BSV;
    const WaveState m = mirror(right);
    accumulate(one_way_solve(m, swapped, times).combined, out.w_star, true);
    accumulate(hybrid_analytic(m, swapped, times).snapshots, out.hybrid, true);
  }
  for (std::size_t n = 0; n < times.size(); ++n) out.w_prime.push_back(combine(out.hybrid[n], out.w_star[n], -1.0));
  return out;
}

double coupling_error_norm(const std::vector<WaveState>& w, const std::vector<WaveState>& w_star, Region region,
                           const PhysParams& params) {
  if (w.size() != w_star.size()) throw std::invalid_argument("sequences have different lengths");
  if (w.empty()) return 0.0;
  const std::size_t nt = w.size();
  std::vector<double> wt(nt, 1.0);
  if (nt > 1) {
    for (std::size_t n = 0; n < nt; ++n) {
      const double lo = n > 0 ? w[n].time - w[n - 1].time : 0.0;
      const double hi = n + 1 < nt ? w[n + 1].time - w[n].time : 0.0;
      wt[n] = 0.5 * (lo + hi);
    }
  }
  const double sv = params.velocity_scale();
  double s = 0.0;
  for (std::size_t n = 0; n < nt; ++n) {
    const WaveState& a = w[n];
    const WaveState& b = w_star[n];
    a.check_consistent();
    b.check_consistent();
    if (a.size() != b.size() || std::abs(a.time - b.time) > 1e-9 * std::max(1.0, std::abs(a.time)))
      throw std::invalid_argument("sequences are not aligned in space and time");
    const Grid1D& g = *a.grid;
    double sn = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double x = g.x(i);
      if ((region == Region::Minus && x >= 0.0) || (region == Region::Plus && x < 0.0)) continue;
      const double de = a.eta[i] - b.eta[i];
      const double du = sv * (a.u[i] - b.u[i]);
      sn += de * de + du * du;
    }
    s += wt[n] * sn * g.dx();
  }
  return std::sqrt(s);
}

}  // namespace hsw
