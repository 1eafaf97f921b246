#include "hsw/laplace_halfline.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hsw/errors.hpp"

namespace hsw {

cplx lambda_b(cplx s, double mu, double c) {
  if (!(s.real() > 0.0)) throw std::invalid_argument("lambda_b requires Re s > 0");
  const cplx q = s / c;
  if (mu == 0.0) return q;
  const cplx lam = q / std::sqrt(1.0 + mu * mu * q * q);
  return lam.real() < 0.0 ? -lam : lam;
}

std::pair<std::array<cplx, 2>, std::array<cplx, 2>> eigvecs_halfline(cplx s, double mu, double c) {
  const cplx r = c * lambda_b(s, mu, c) / s;
  return {{r, cplx(1.0)}, {-r, cplx(1.0)}};
}

double default_sigma(double t_padded) { return 3.0 * std::numbers::ln10 / t_padded; }

LaplaceSignal damped_fft(const TimeSeries& trace, double sigma, std::size_t pad_factor) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (pad_factor < 1) throw std::invalid_argument("pad factor must be at least 1");
  if (std::abs(trace.t0) > 1e-12 * trace.dt) throw std::invalid_argument("trace must start at t = 0");
  const std::size_t n = trace.size();
  const std::size_t m = n * pad_factor;
  LaplaceSignal sig;
  sig.sigma = sigma;
  sig.dt = trace.dt;
  sig.n_samples = n;
  sig.n_pad = pad_factor;
  std::vector<cplx> g(m, cplx(0.0));
  for (std::size_t i = 0; i < n; ++i)
    g[i] = trace.values[i] * std::exp(-sigma * trace.dt * static_cast<double>(i));
  sig.coeffs = fft_forward(g);
  const double scale = static_cast<double>(m) * trace.dt;
  for (auto& v : sig.coeffs) v *= scale;
  sig.omega.resize(m);
  const double dw = 2.0 * std::numbers::pi / (static_cast<double>(m) * trace.dt);
  for (std::size_t k = 0; k < m; ++k) sig.omega[k] = dw * static_cast<double>(fft_index(k, m));
  return sig;
}

LaplaceSignal damped_fft(const TimeSeries& trace, std::size_t pad_factor) {
  const double tp = trace.dt * static_cast<double>(trace.size() * pad_factor);
  return damped_fft(trace, default_sigma(tp), pad_factor);
}

TimeSeries damped_ifft(const LaplaceSignal& sig) {
  auto f = fft_inverse(sig.coeffs);
  const double scale = 1.0 / sig.t_padded();
  std::vector<double> v(sig.n_samples);
  for (std::size_t i = 0; i < sig.n_samples; ++i)
    v[i] = f[i].real() * scale * std::exp(sig.sigma * sig.dt * static_cast<double>(i));
  return TimeSeries(0.0, sig.dt, std::move(v));
}

void check_pole_distance(const LaplaceSignal& sig, double mu, double c) {
  if (mu == 0.0) return;
  for (std::size_t k = 0; k < sig.size(); ++k) {
    const cplx q = sig.s(k) * (mu / c);
    if (std::abs(1.0 + q * q) < 1e-8)
      throw SolverError(fmt::format("Laplace axis passes within 1e-8 of a branch point at omega = {}; raise sigma",
                                    sig.omega[k]));
  }
}

HalfLineSolver::HalfLineSolver(const TimeSeries& u_gamma, const PhysParams& params, double mu, Side side,
                               std::size_t pad_factor)
    : params_(params), mu_(mu), side_(side) {
  const double sv = params.velocity_scale();
  const double c = params.wave_speed();
  TimeSeries ut = u_gamma;
  double umax = 0.0;
  for (double& v : ut.values) {
    v *= sv;
    umax = std::max(umax, std::abs(v));
  }
  if (!ut.values.empty() && std::abs(ut.values.front()) > 1e-6 * umax)
    spdlog::warn("boundary trace does not vanish at t = 0 (u(0) = {:.3e}); expect a startup transient",
                 u_gamma.values.front());
  sig_ = damped_fft(ut, pad_factor);
  check_pole_distance(sig_, mu_, c);
  const double sgn = side == Side::Plus ? 1.0 : -1.0;
  lambda_.resize(sig_.size());
  ratio_.resize(sig_.size());
  for (std::size_t k = 0; k < sig_.size(); ++k) {
    const cplx s = sig_.s(k);
    lambda_[k] = lambda_b(s, mu_, c);
    ratio_[k] = sgn * c * lambda_[k] / s;
  }
}

HalfLineProbe HalfLineSolver::probe(double x) const {
  if ((side_ == Side::Plus && x < 0.0) || (side_ == Side::Minus && x > 0.0))
    throw std::invalid_argument("probe lies on the wrong side of the interface");
  const double ax = std::abs(x);
  LaplaceSignal su = sig_, se = sig_;
  for (std::size_t k = 0; k < sig_.size(); ++k) {
    const cplx v = sig_.coeffs[k] * std::exp(-lambda_[k] * ax);
    su.coeffs[k] = v;
    se.coeffs[k] = ratio_[k] * v;
  }
  HalfLineProbe p;
  p.x = x;
  p.u = damped_ifft(su);
  p.eta = damped_ifft(se);
  const double sv = params_.velocity_scale();
  for (double& v : p.u.values) v /= sv;
  p.u.location = p.eta.location = x;
  return p;
}

std::pair<std::vector<double>, std::vector<double>> HalfLineSolver::snapshot(double t, double dx,
                                                                             std::size_t n_nodes,
                                                                             double tol) const {
  const std::size_t m = sig_.size();
  std::vector<double> eta(n_nodes, 0.0), u(n_nodes, 0.0);
  if (m == 0 || n_nodes == 0) return {eta, u};
  double amax = 0.0;
  for (const auto& a : sig_.coeffs) amax = std::max(amax, std::abs(a));
  if (amax == 0.0) return {eta, u};
  const double floor = tol * amax;
  const std::size_t kmax = m / 2;
  for (std::size_t k = 0; k <= kmax; ++k) {
    const double w = (k == 0 || (m % 2 == 0 && k == kmax)) ? 1.0 : 2.0;
    const cplx a = sig_.coeffs[k];
    const double mag = w * std::abs(a);
    if (mag <= floor) continue;
    const cplx lam = lambda_[k];
    const double reach = std::log(mag / floor) / lam.real();
    const std::size_t imax =
        static_cast<std::size_t>(std::min(static_cast<double>(n_nodes - 1), std::floor(reach / dx)));
    const double ph = sig_.omega[k] * t;
    cplx val = w * a * cplx(std::cos(ph), std::sin(ph));
    const cplx step = std::exp(-lam * dx);
    const double rr = ratio_[k].real(), ri = ratio_[k].imag();
    const double sr = step.real(), si = step.imag();
    double vr = val.real(), vi = val.imag();
    for (std::size_t i = 0; i <= imax; ++i) {
      u[i] += vr;
      eta[i] += rr * vr - ri * vi;
      const double nr = vr * sr - vi * si;
      vi = vr * si + vi * sr;
      vr = nr;
    }
  }
  const double scale = std::exp(sig_.sigma * t) / sig_.t_padded();
  const double sv = params_.velocity_scale();
  for (std::size_t i = 0; i < n_nodes; ++i) {
    eta[i] *= scale;
    u[i] *= scale / sv;
  }
  return {eta, u};
}

HalfLineField evolve_b_halfline(const TimeSeries& u_gamma, const PhysParams& params, const std::vector<double>& xs,
                                Side side) {
  HalfLineSolver solver(u_gamma, params, params.mu, side);
  HalfLineField f;
  f.side = side;
  f.probes.reserve(xs.size());
  for (double x : xs) f.probes.push_back(solver.probe(x));
  return f;
}

}  // namespace hsw
