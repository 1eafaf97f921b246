#include "hsw/fd_hybrid.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hsw/errors.hpp"

namespace hsw {

namespace {

constexpr double kD1[5] = {1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0};
constexpr double kD2[5] = {-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0};
constexpr double kDefaultCfl = 0.15;

void d1_into(const double* f, double* out, std::size_t n, double scale) {
  if (n < 5) {
    std::fill(out, out + n, 0.0);
    return;
  }
  out[0] = out[1] = out[n - 2] = out[n - 1] = 0.0;
  for (std::size_t i = 2; i + 2 < n; ++i)
    out[i] = scale * (kD1[0] * f[i - 2] + kD1[1] * f[i - 1] + kD1[3] * f[i + 1] + kD1[4] * f[i + 2]);
}

}  // namespace

std::vector<double> dx4(std::span<const double> f, double dx) {
  std::vector<double> out(f.size());
  d1_into(f.data(), out.data(), f.size(), 1.0 / dx);
  return out;
}

std::vector<double> dxx4(std::span<const double> f, double dx) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  const double s = 1.0 / (dx * dx);
  for (std::size_t i = 2; i + 2 < n; ++i)
    out[i] = s * (kD2[0] * f[i - 2] + kD2[1] * f[i - 1] + kD2[2] * f[i] + kD2[3] * f[i + 1] + kD2[4] * f[i + 2]);
  return out;
}

std::vector<double> make_chi(const Grid1D& grid, const PhysParams& params, ChiProfile profile) {
  std::vector<double> chi(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    switch (profile) {
      case ChiProfile::AllBoussinesq: chi[i] = 1.0; break;
      case ChiProfile::AllSaintVenant: chi[i] = 0.0; break;
      case ChiProfile::Hybrid: {
        // The node at x = 0 belongs to the right half.
        const bool minus = grid.x(i) < 0.0;
        chi[i] = (params.coupling == CouplingCase::BSV) == minus ? 1.0 : 0.0;
        break;
      }
    }
  }
  return chi;
}

BandedOperator::BandedOperator(const Grid1D& grid, std::span<const double> chi, double mu)
    : offset_(grid.first_interior()),
      m_(grid.n_interior() + 1),
      total_(grid.size()),
      mu_(mu),
      dx_(grid.dx()),
      chi_(chi.begin(), chi.end()) {
  if (chi.size() != grid.size()) throw std::invalid_argument("chi does not match grid");
  if (grid.n_ghost() < 2) throw std::invalid_argument("the fourth-order stencil needs two ghost nodes per side");
  band_.assign(5 * m_, 0.0);
  const double s = mu_ * mu_ / (dx_ * dx_);
  for (std::size_t i = 0; i < m_; ++i) {
    const double c = chi_[offset_ + i] * s;
    for (int d = -2; d <= 2; ++d) {
      const long j = static_cast<long>(i) + d;
      if (j < 0 || j >= static_cast<long>(m_)) continue;
      band_[5 * i + static_cast<std::size_t>(d + 2)] = (d == 0 ? 1.0 : 0.0) - c * kD2[d + 2];
    }
  }
  // Banded Doolittle LU.  The Boussinesq rows are diagonally dominant and the
  // Saint-Venant rows are identity rows, so no pivoting is needed.
  lu_ = band_;
  auto at = [&](std::size_t i, std::size_t j) -> double& { return lu_[5 * i + (j + 2 - i)]; };
  for (std::size_t k = 0; k < m_; ++k) {
    const double piv = at(k, k);
    if (!(std::abs(piv) > 1e-300) || !std::isfinite(piv))
      throw SolverError(fmt::format("singular band matrix at row {}", k));
    for (std::size_t i = k + 1; i <= std::min(k + 2, m_ - 1); ++i) {
      double& lik = at(i, k);
      if (lik == 0.0) continue;
      lik /= piv;
      for (std::size_t j = k + 1; j <= std::min(k + 2, m_ - 1); ++j) at(i, j) -= lik * at(k, j);
    }
  }
}

void BandedOperator::solve_into(std::span<const double> q, std::span<double> u) const {
  if (q.size() != total_ || u.size() != total_) throw std::invalid_argument("vector does not match operator");
  const double* L = lu_.data();
  double* x = u.data() + offset_;
  const double* b = q.data() + offset_;
  // forward: L y = b (unit diagonal)
  for (std::size_t i = 0; i < m_; ++i) {
    double v = b[i];
    if (i >= 1) v -= L[5 * i + 1] * x[i - 1];
    if (i >= 2) v -= L[5 * i + 0] * x[i - 2];
    x[i] = v;
  }
  // backward: U x = y
  for (std::size_t ii = m_; ii-- > 0;) {
    double v = x[ii];
    if (ii + 1 < m_) v -= L[5 * ii + 3] * x[ii + 1];
    if (ii + 2 < m_) v -= L[5 * ii + 4] * x[ii + 2];
    x[ii] = v / L[5 * ii + 2];
  }
  std::fill(u.begin(), u.begin() + static_cast<long>(offset_), 0.0);
  std::fill(u.begin() + static_cast<long>(offset_ + m_), u.end(), 0.0);
}

std::vector<double> BandedOperator::solve(std::span<const double> q) const {
  std::vector<double> u(total_, 0.0);
  solve_into(q, u);
  return u;
}

std::vector<double> BandedOperator::apply(std::span<const double> u) const {
  if (u.size() != total_) throw std::invalid_argument("vector does not match operator");
  std::vector<double> out(total_, 0.0);
  for (std::size_t i = 0; i < m_; ++i) {
    double v = 0.0;
    for (int d = -2; d <= 2; ++d) {
      const long j = static_cast<long>(i) + d;
      if (j < 0 || j >= static_cast<long>(m_)) continue;
      v += band_[5 * i + static_cast<std::size_t>(d + 2)] * u[offset_ + static_cast<std::size_t>(j)];
    }
    out[offset_ + i] = v;
  }
  return out;
}

std::vector<double> recover_u(std::span<const double> q, const BandedOperator& op) { return op.solve(q); }

HybridState make_hybrid_state(const WaveState& w0, const PhysParams& params, ChiProfile profile,
                              const BandedOperator& op) {
  w0.check_consistent();
  const Grid1D& g = *w0.grid;
  HybridState s;
  s.chi = make_chi(g, params, profile);
  s.eta.assign(g.size(), 0.0);
  std::vector<double> u0(g.size(), 0.0);
  for (std::size_t i = g.first_interior(); i <= g.last_interior(); ++i) {
    s.eta[i] = w0.eta[i];
    u0[i] = w0.u[i];
  }
  s.q = op.apply(u0);
  s.u = op.solve(s.q);
  s.time = w0.time;
  return s;
}

namespace {

// Reusable buffers for the three stages.
class Stepper {
 public:
  Stepper(const PhysParams& p, const BandedOperator& op, double dx, std::size_t n)
      : h0_(p.h0), g_(p.g), op_(op), inv_dx_(1.0 / dx), fe_(n), fq_(n), e1_(n), q1_(n), u1_(n) {}

  void step(HybridState& s, double dt) {
    const std::size_t n = s.eta.size();
    // stage 1
    rhs(s.eta, s.u);
    for (std::size_t i = 0; i < n; ++i) {
      e1_[i] = s.eta[i] + dt * fe_[i];
      q1_[i] = s.q[i] + dt * fq_[i];
    }
    op_.solve_into(q1_, u1_);
    // stage 2
    rhs(e1_, u1_);
    for (std::size_t i = 0; i < n; ++i) {
      e1_[i] = 0.75 * s.eta[i] + 0.25 * e1_[i] + 0.25 * dt * fe_[i];
      q1_[i] = 0.75 * s.q[i] + 0.25 * q1_[i] + 0.25 * dt * fq_[i];
    }
    op_.solve_into(q1_, u1_);
    // stage 3
    rhs(e1_, u1_);
    constexpr double a = 1.0 / 3.0, b = 2.0 / 3.0;
    for (std::size_t i = 0; i < n; ++i) {
      s.eta[i] = a * s.eta[i] + b * e1_[i] + b * dt * fe_[i];
      s.q[i] = a * s.q[i] + b * q1_[i] + b * dt * fq_[i];
    }
    op_.solve_into(s.q, s.u);
    s.time += dt;
  }

 private:
  void rhs(const std::vector<double>& eta, const std::vector<double>& u) {
    const std::size_t n = eta.size();
    d1_into(u.data(), fe_.data(), n, -h0_ * inv_dx_);
    d1_into(eta.data(), fq_.data(), n, -g_ * inv_dx_);
  }
  double h0_, g_;
  const BandedOperator& op_;
  double inv_dx_;
  std::vector<double> fe_, fq_, e1_, q1_, u1_;
};

}  // namespace

HybridState rk3_step(const HybridState& state, const PhysParams& params, double dt, const BandedOperator& op,
                     double dx) {
  const double courant = params.wave_speed() * dt / dx;
  if (courant > kDefaultCfl * (1.0 + 1e-12))
    spdlog::warn("time step exceeds the default CFL bound ({:.3f} > {:.2f})", courant, kDefaultCfl);
  HybridState s = state;
  Stepper st(params, op, dx, s.eta.size());
  st.step(s, dt);
  return s;
}

double fd_time_step(const Grid1D& grid, const PhysParams& params, double cfl, double t_end) {
  if (!(cfl > 0.0)) throw std::invalid_argument("cfl must be positive");
  const double dt_max = cfl * grid.dx() / params.wave_speed();
  if (t_end <= 0.0) return dt_max;
  const double steps = std::ceil(t_end / dt_max - 1e-9);
  return t_end / steps;
}

HybridRun run_hybrid(const WaveState& w0, const PhysParams& params, double t_end, const HybridRunOptions& opts) {
  w0.check_consistent();
  const Grid1D& g = *w0.grid;
  if (g.n_ghost() != 2) throw std::invalid_argument("the finite difference scheme requires exactly two ghost nodes");
  if (t_end < 0.0) throw std::invalid_argument("t_end must be nonnegative");
  if (opts.cfl > kDefaultCfl * (1.0 + 1e-12))
    spdlog::warn("CFL number {:.3f} exceeds the default {:.2f}", opts.cfl, kDefaultCfl);

  const std::vector<double> chi = make_chi(g, params, opts.profile);
  BandedOperator op(g, chi, params.mu);
  HybridState s = make_hybrid_state(w0, params, opts.profile, op);

  HybridRun run;
  run.dt = fd_time_step(g, params, opts.cfl, t_end);
  run.steps = t_end > 0.0 ? static_cast<std::size_t>(std::llround(t_end / run.dt)) : 0;
  const std::size_t probe = opts.probe_index.value_or(g.interface_index() + 1);
  if (probe >= g.size()) throw std::invalid_argument("probe index outside grid");

  std::vector<std::pair<std::size_t, std::size_t>> wanted;  // (step, slot)
  for (std::size_t k = 0; k < opts.snapshot_times.size(); ++k) {
    const double t = opts.snapshot_times[k];
    if (t < 0.0 || t > t_end * (1.0 + 1e-12)) throw std::invalid_argument("snapshot time outside [0, t_end]");
    wanted.emplace_back(static_cast<std::size_t>(std::llround(t / run.dt)), k);
  }
  std::sort(wanted.begin(), wanted.end());
  run.snapshots.resize(wanted.size());
  std::size_t next = 0;
  auto record = [&](std::size_t step) {
    while (next < wanted.size() && wanted[next].first == step) {
      WaveState w(w0.grid, s.time);
      w.eta = s.eta;
      w.u = s.u;
      run.snapshots[wanted[next].second] = std::move(w);
      ++next;
    }
  };

  for (std::size_t e : opts.extra_probes)
    if (e >= g.size()) throw std::invalid_argument("probe index outside grid");
  std::vector<double> trace;
  trace.reserve(run.steps + 1);
  trace.push_back(s.u[probe]);
  std::vector<std::vector<double>> extra(opts.extra_probes.size());
  for (std::size_t k = 0; k < extra.size(); ++k) {
    extra[k].reserve(run.steps + 1);
    extra[k].push_back(s.u[opts.extra_probes[k]]);
  }
  record(0);
  Stepper st(params, op, g.dx(), s.eta.size());
  for (std::size_t n = 1; n <= run.steps; ++n) {
    st.step(s, run.dt);
    s.time = static_cast<double>(n) * run.dt;
    // A non-finite eta reaches every u within one step through q and the solve.
    if (!std::all_of(s.u.begin(), s.u.end(), [](double v) { return std::isfinite(v); }))
      throw SolverError(fmt::format("non-finite values at step {} (t = {})", n, s.time));
    trace.push_back(s.u[probe]);
    for (std::size_t k = 0; k < extra.size(); ++k) extra[k].push_back(s.u[opts.extra_probes[k]]);
    record(n);
  }
  if (!std::all_of(s.u.begin(), s.u.end(), [](double v) { return std::isfinite(v); }) ||
      !std::all_of(s.eta.begin(), s.eta.end(), [](double v) { return std::isfinite(v); }))
    throw SolverError(fmt::format("non-finite values after step {}", run.steps));
  run.trace = TimeSeries(0.0, run.dt, std::move(trace), g.x(probe));
  for (std::size_t k = 0; k < extra.size(); ++k)
    run.extra_traces.emplace_back(0.0, run.dt, std::move(extra[k]), g.x(opts.extra_probes[k]));
  return run;
}

double discrete_energy(const HybridState& s, const PhysParams& params, double dx) {
  double e = 0.0;
  for (std::size_t i = 0; i < s.eta.size(); ++i) e += params.g * s.eta[i] * s.eta[i] + params.h0 * s.u[i] * s.q[i];
  return e * dx;
}

}  // namespace hsw
