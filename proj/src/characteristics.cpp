#include "hsw/characteristics.hpp"

#include <cmath>
#include <stdexcept>

namespace hsw {

SampledFunction::SampledFunction(double x_first, double dx, std::vector<double> values)
    : x0_(x_first), dx_(dx), v_(std::move(values)) {
  if (!(dx_ > 0.0)) throw std::invalid_argument("sample spacing must be positive");
}

SampledFunction::SampledFunction(const Grid1D& grid, std::vector<double> values)
    : SampledFunction(grid.x(0), grid.dx(), std::move(values)) {
  if (v_.size() != grid.size()) throw std::invalid_argument("values do not match grid");
}

double SampledFunction::x_last() const { return x0_ + dx_ * static_cast<double>(v_.size() - 1); }

double SampledFunction::operator()(double x) const {
  if (v_.empty()) return 0.0;
  const double p = (x - x0_) / dx_;
  const double last = static_cast<double>(v_.size() - 1);
  // Positions within roundoff of a node snap to it so that node evaluations are exact.
  const double pr = std::round(p);
  if (std::abs(p - pr) < 1e-9) {
    if (pr < 0.0 || pr > last) return 0.0;
    return v_[static_cast<std::size_t>(pr)];
  }
  if (p < 0.0 || p > last) return 0.0;
  const std::size_t i = static_cast<std::size_t>(p);
  const double w = p - static_cast<double>(i);
  return (1.0 - w) * v_[i] + w * v_[i + 1];
}

WaveState sv_cauchy_exact(const WaveState& w0, double t, const PhysParams& params) {
  w0.check_consistent();
  const Grid1D& g = *w0.grid;
  const double sv = params.velocity_scale();
  const double ct = params.wave_speed() * t;
  std::vector<double> ut(w0.u);
  for (double& v : ut) v *= sv;
  SampledFunction eta0(g, w0.eta), u0(g, std::move(ut));
  WaveState w(w0.grid, w0.time + t);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.x(i);
    const double em = eta0(x - ct), ep = eta0(x + ct);
    const double um = u0(x - ct), up = u0(x + ct);
    w.eta[i] = 0.5 * (em + ep) + 0.5 * (um - up);
    w.u[i] = (0.5 * (em - ep) + 0.5 * (um + up)) / sv;
  }
  return w;
}

std::pair<double, double> sv_halfline(const TimeSeries& u_gamma, double x, double t, Side side,
                                      const PhysParams& params) {
  const double c = params.wave_speed();
  const double sv = params.velocity_scale();
  if (side == Side::Plus) {
    if (x < 0.0) throw std::invalid_argument("plus side requires x >= 0");
    const double tau = t - x / c;
    if (tau < u_gamma.t0) return {0.0, 0.0};
    const double u = u_gamma.sample(tau);
    return {sv * u, u};
  }
  if (x > 0.0) throw std::invalid_argument("minus side requires x <= 0");
  const double tau = t + x / c;
  if (tau < u_gamma.t0) return {0.0, 0.0};
  const double u = u_gamma.sample(tau);
  return {-sv * u, u};
}

WaveState sv_halfline_state(const TimeSeries& u_gamma, GridPtr grid, double t, Side side,
                            const PhysParams& params) {
  WaveState w(grid, t);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double x = grid->x(i);
    const bool on_side = side == Side::Plus ? x >= 0.0 : x < 0.0;
    if (!on_side) continue;
    auto [e, u] = sv_halfline(u_gamma, x, t, side, params);
    w.eta[i] = e;
    w.u[i] = u;
  }
  return w;
}

}  // namespace hsw
