#include "hsw/spectral_cauchy.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hsw/errors.hpp"

namespace hsw {

double dispersion_b(double kappa, double mu, double c) {
  return c * kappa / std::sqrt(1.0 + mu * mu * kappa * kappa);
}

SpectralDecomposition decompose_b(double kappa, double mu, double c) {
  SpectralDecomposition d;
  const double psi = std::sqrt(1.0 + mu * mu * kappa * kappa);
  d.kappa = kappa;
  d.omega = c * kappa / psi;
  d.S = {cplx(-psi), cplx(psi), cplx(1.0), cplx(1.0)};
  const double det = -2.0 * psi;
  // inverse of [[a, b], [c, d]] is [[d, -b], [-c, a]] / det
  d.S_inv = {cplx(1.0 / det), cplx(-psi / det), cplx(-1.0 / det), cplx(-psi / det)};
  d.J_diag = {cplx(0.0, d.omega), cplx(0.0, -d.omega)};
  return d;
}

std::vector<double> wavenumbers(std::size_t n, double dx) {
  std::vector<double> k(n);
  const double dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * dx);
  for (std::size_t i = 0; i < n; ++i) k[i] = dk * static_cast<double>(fft_index(i, n));
  return k;
}

SpectralField snapshot_spectrum(const WaveState& w) {
  w.check_consistent();
  const Grid1D& g = *w.grid;
  const std::size_t n = g.n_interior();
  const std::size_t off = g.first_interior();
  SpectralField f;
  f.kappa = wavenumbers(n, g.dx());
  f.dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * g.dx());
  f.x_ref = g.x(off);
  f.eta_hat = fft_forward_real(std::span<const double>(w.eta).subspan(off, n));
  f.u_hat = fft_forward_real(std::span<const double>(w.u).subspan(off, n));
  return f;
}

namespace {

std::vector<double> real_part_checked(const std::vector<cplx>& v, double scale_ref, const char* what) {
  std::vector<double> r(v.size());
  double im = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    r[i] = v[i].real();
    im = std::max(im, std::abs(v[i].imag()));
  }
  if (im > 1e-6 * scale_ref && im > 1e-300)
    throw SolverError(fmt::format("imaginary residue {:.3e} in {} exceeds tolerance", im, what));
  if (im > 1e-10 * scale_ref) spdlog::debug("imaginary residue {:.3e} discarded in {}", im, what);
  return r;
}

void scatter_periodic(const std::vector<double>& per, const Grid1D& g, std::vector<double>& out) {
  const std::size_t off = g.first_interior();
  std::fill(out.begin(), out.end(), 0.0);
  std::copy(per.begin(), per.end(), out.begin() + static_cast<long>(off));
  out[g.last_interior()] = per.front();
}

}  // namespace

WaveState spectrum_to_state(const SpectralField& f, GridPtr grid, double time) {
  if (grid->n_interior() != f.n()) throw std::invalid_argument("spectrum does not fit grid");
  WaveState w(grid, time);
  auto eta_c = fft_inverse(f.eta_hat);
  auto u_c = fft_inverse(f.u_hat);
  double ref = 0.0;
  for (std::size_t i = 0; i < eta_c.size(); ++i)
    ref = std::max({ref, std::abs(eta_c[i]), std::abs(u_c[i])});
  scatter_periodic(real_part_checked(eta_c, ref, "eta"), *grid, w.eta);
  scatter_periodic(real_part_checked(u_c, ref, "u"), *grid, w.u);
  return w;
}

double energy_norm_b(const SpectralField& spec, double mu) {
  double s = 0.0;
  for (std::size_t k = 0; k < spec.n(); ++k) {
    const double kk = spec.kappa[k];
    s += std::norm(spec.eta_hat[k]) + (1.0 + mu * mu * kk * kk) * std::norm(spec.u_hat[k]);
  }
  return std::sqrt(s * spec.dk);
}

double energy_norm_b(const SpectralField& spec, const PhysParams& params) {
  const double sv2 = params.velocity_scale() * params.velocity_scale();
  const double mu = params.mu;
  double s = 0.0;
  for (std::size_t k = 0; k < spec.n(); ++k) {
    const double kk = spec.kappa[k];
    s += std::norm(spec.eta_hat[k]) + (1.0 + mu * mu * kk * kk) * sv2 * std::norm(spec.u_hat[k]);
  }
  return std::sqrt(s * spec.dk);
}

CauchyPropagator::CauchyPropagator(const WaveState& w0, const PhysParams& params, CauchyOptions opts)
    : grid_(w0.grid), params_(params), opts_(opts), spec0_(snapshot_spectrum(w0)) {
  const std::size_t n = spec0_.n();
  const double sv = params_.velocity_scale();
  const double c = params_.wave_speed();
  const double mu = params_.mu;
  a1_.resize(n);
  a2_.resize(n);
  psi_.resize(n);
  omega_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = spec0_.kappa[k];
    const double psi = std::sqrt(1.0 + mu * mu * kk * kk);
    const cplx ut = spec0_.u_hat[k] * sv;
    const cplx et = spec0_.eta_hat[k];
    psi_[k] = psi;
    omega_[k] = c * kk / psi;
    a1_[k] = 0.5 * (ut - et / psi);
    a2_[k] = 0.5 * (ut + et / psi);
  }
}

void CauchyPropagator::check_window(double t) const {
  if (t < 0.0) throw std::invalid_argument("evolution time must be nonnegative");
  if (!opts_.enforce_window) return;
  const double half = 0.5 * (grid_->x_max() - grid_->x_min());
  if (params_.wave_speed() * t >= half)
    throw SolverError(fmt::format("t = {} exceeds the periodic validity window (c t must stay below {} m)", t, half));
}

WaveState CauchyPropagator::at(double t) const {
  check_window(t);
  const std::size_t n = spec0_.n();
  const bool even = n % 2 == 0;
  SpectralField f = spec0_;
  const double sv = params_.velocity_scale();
  for (std::size_t k = 0; k < n; ++k) {
    const double ph = omega_[k] * t;
    if (even && k == n / 2) {
      // The grid cannot tell +kappa_N from -kappa_N; keep the real standing wave.
      const double cs = std::cos(ph);
      f.eta_hat[k] = spec0_.eta_hat[k] * cs;
      f.u_hat[k] = spec0_.u_hat[k] * cs;
      continue;
    }
    const cplx e(std::cos(ph), std::sin(ph));
    const cplx p1 = a1_[k] * e;
    const cplx p2 = a2_[k] * std::conj(e);
    f.eta_hat[k] = psi_[k] * (p2 - p1);
    f.u_hat[k] = (p1 + p2) / sv;
  }
  return spectrum_to_state(f, grid_, t);
}

std::pair<TimeSeries, TimeSeries> CauchyPropagator::trace(double x, double dt, std::size_t n_samples) const {
  if (n_samples == 0) throw std::invalid_argument("empty trace requested");
  check_window(dt * static_cast<double>(n_samples - 1));
  const std::size_t n = spec0_.n();
  const bool even = n % 2 == 0;
  const std::size_t kmax = n / 2;
  const double sv = params_.velocity_scale();

  // value(t) = sum_k C_k cos(omega_k t) + S_k sin(omega_k t) for each field.
  std::vector<double> om, ce, se, cu, su;
  double amax = 0.0;
  for (std::size_t k = 0; k <= kmax; ++k) amax = std::max({amax, std::abs(a1_[k]), std::abs(a2_[k])});
  const double cut = 1e-18 * amax;
  for (std::size_t k = 0; k <= kmax; ++k) {
    if (std::abs(a1_[k]) <= cut && std::abs(a2_[k]) <= cut) continue;
    const double kk = spec0_.kappa[k];
    const double ang = kk * (x - spec0_.x_ref);
    const cplx phi(std::cos(ang), std::sin(ang));
    if (even && k == kmax) {
      om.push_back(omega_[k]);
      ce.push_back((spec0_.eta_hat[k] * phi).real());
      se.push_back(0.0);
      cu.push_back((spec0_.u_hat[k] * phi).real() * sv);
      su.push_back(0.0);
      continue;
    }
    const double w = (k == 0) ? 1.0 : 2.0;
    const cplx Ae = -psi_[k] * a1_[k] * phi * w, Be = psi_[k] * a2_[k] * phi * w;
    const cplx Au = a1_[k] * phi * w, Bu = a2_[k] * phi * w;
    om.push_back(omega_[k]);
    ce.push_back(Ae.real() + Be.real());
    se.push_back(Be.imag() - Ae.imag());
    cu.push_back(Au.real() + Bu.real());
    su.push_back(Bu.imag() - Au.imag());
  }
  const std::size_t m = om.size();
  std::vector<double> cs(m), sn(m), cr(m), sr(m);
  for (std::size_t j = 0; j < m; ++j) {
    cr[j] = std::cos(om[j] * dt);
    sr[j] = std::sin(om[j] * dt);
  }
  std::vector<double> eta(n_samples), u(n_samples);
  constexpr std::size_t resync = 256;
  for (std::size_t s = 0; s < n_samples; ++s) {
    if (s % resync == 0) {
      const double t = dt * static_cast<double>(s);
      for (std::size_t j = 0; j < m; ++j) {
        cs[j] = std::cos(om[j] * t);
        sn[j] = std::sin(om[j] * t);
      }
    }
    double ve = 0.0, vu = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      ve += ce[j] * cs[j] + se[j] * sn[j];
      vu += cu[j] * cs[j] + su[j] * sn[j];
    }
    eta[s] = ve;
    u[s] = vu / sv;
    for (std::size_t j = 0; j < m; ++j) {
      const double c0 = cs[j];
      cs[j] = c0 * cr[j] - sn[j] * sr[j];
      sn[j] = sn[j] * cr[j] + c0 * sr[j];
    }
  }
  return {TimeSeries(0.0, dt, std::move(eta), x), TimeSeries(0.0, dt, std::move(u), x)};
}

TimeSeries CauchyPropagator::trace_u(double x, double dt, std::size_t n_samples) const {
  return trace(x, dt, n_samples).second;
}

WaveState evolve_b_cauchy(const WaveState& w0, const PhysParams& params, double t, CauchyOptions opts) {
  return CauchyPropagator(w0, params, opts).at(t);
}

}  // namespace hsw
