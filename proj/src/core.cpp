#include "hsw/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hsw/errors.hpp"

namespace hsw {

std::string to_string(CouplingCase c) { return c == CouplingCase::BSV ? "bsv" : "svb"; }

CouplingCase coupling_case_from_string(const std::string& s) {
  std::string l = s;
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (l == "bsv") return CouplingCase::BSV;
  if (l == "svb") return CouplingCase::SVB;
  throw ConfigError("unknown coupling case '" + s + "' (expected bsv or svb)");
}

PhysParams PhysParams::from_depth(double h0, CouplingCase coupling, double g) {
  if (!(h0 > 0.0) || !std::isfinite(h0)) throw std::invalid_argument("h0 must be positive");
  if (!(g > 0.0) || !std::isfinite(g)) throw std::invalid_argument("g must be positive");
  PhysParams p;
  p.h0 = h0;
  p.g = g;
  p.mu = h0 / std::numbers::sqrt3;
  p.coupling = coupling;
  p.dimensional = true;
  return p;
}

PhysParams PhysParams::nondimensional(double mu, CouplingCase coupling) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be nonnegative");
  PhysParams p;
  p.h0 = 1.0;
  p.g = 1.0;
  p.mu = mu;
  p.coupling = coupling;
  p.dimensional = false;
  return p;
}

double PhysParams::wave_speed() const { return std::sqrt(g * h0); }

double PhysParams::velocity_scale() const { return std::sqrt(h0 / g); }

double PhysParams::mu_minus() const { return coupling == CouplingCase::BSV ? mu : 0.0; }

double PhysParams::mu_plus() const { return coupling == CouplingCase::SVB ? mu : 0.0; }

PhysParams PhysParams::with_mu(double new_mu) const {
  PhysParams p = *this;
  p.mu = new_mu;
  return p;
}

Grid1D make_grid(double x_min, double x_max, double dx, std::size_t n_ghost) {
  if (!(dx > 0.0) || !std::isfinite(dx)) throw std::invalid_argument("dx must be positive");
  if (!(x_min < 0.0 && 0.0 < x_max)) throw std::invalid_argument("domain must straddle x = 0");
  const double len = x_max - x_min;
  const double cells = std::round(len / dx);
  if (cells < 2.0 || std::abs(cells * dx - len) > 1e-6 * dx)
    throw std::invalid_argument("domain length is not an integer multiple of dx");

  Grid1D g;
  g.x_min_ = x_min;
  g.x_max_ = x_max;
  g.dx_ = dx;
  g.n_cells_ = static_cast<std::size_t>(cells);
  g.n_ghost_ = n_ghost;
  const std::size_t n = g.n_cells_ + 1 + 2 * n_ghost;
  g.nodes_.resize(n);
  // Nodes are placed relative to the one nearest the origin so that x = 0 is
  // represented exactly whenever it falls on the lattice.
  const double k0 = std::round(-x_min / dx);
  const bool origin_on_grid = std::abs(k0 * dx + x_min) < 1e-6 * dx;
  for (std::size_t i = 0; i < n; ++i) {
    const double k = static_cast<double>(i) - static_cast<double>(n_ghost);
    g.nodes_[i] = origin_on_grid ? (k - k0) * dx : x_min + k * dx;
  }
  std::size_t i_star = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (g.nodes_[i] < 0.0) i_star = i;
  g.i_star_ = i_star;
  return g;
}

bool Grid1D::has_origin_node() const { return nodes_[i_star_ + 1] == 0.0; }

bool Grid1D::is_symmetric() const {
  if (!has_origin_node()) return false;
  const std::size_t n = nodes_.size();
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(nodes_[i] + nodes_[n - 1 - i]) > 1e-9 * dx_) return false;
  return true;
}

std::size_t Grid1D::nearest(double x) const {
  const double k = std::round((x - nodes_.front()) / dx_);
  if (k <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(k), nodes_.size() - 1);
}

WaveState::WaveState(GridPtr g, double t)
    : grid(std::move(g)), eta(grid->size(), 0.0), u(grid->size(), 0.0), time(t) {}

bool WaveState::all_finite() const {
  auto fin = [](double v) { return std::isfinite(v); };
  return std::all_of(eta.begin(), eta.end(), fin) && std::all_of(u.begin(), u.end(), fin);
}

void WaveState::check_consistent() const {
  if (!grid) throw std::invalid_argument("wave state without grid");
  if (eta.size() != grid->size() || u.size() != grid->size())
    throw std::invalid_argument("wave state length does not match grid");
}

TimeSeries::TimeSeries(double t0_, double dt_, std::vector<double> v, double loc)
    : t0(t0_), dt(dt_), values(std::move(v)), location(loc) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
}

std::vector<double> TimeSeries::times() const {
  std::vector<double> t(values.size());
  for (std::size_t n = 0; n < t.size(); ++n) t[n] = time(n);
  return t;
}

double TimeSeries::sample(double t) const {
  if (values.empty()) return 0.0;
  const double p = (t - t0) / dt;
  const double last = static_cast<double>(values.size() - 1);
  if (p < -1e-9 || p > last + 1e-9) return 0.0;
  const double pr = std::round(p);
  if (std::abs(p - pr) < 1e-9) return values[static_cast<std::size_t>(std::clamp(pr, 0.0, last))];
  const double pc = std::clamp(p, 0.0, last);
  const std::size_t i = std::min(static_cast<std::size_t>(pc), values.size() - 1);
  if (i + 1 >= values.size()) return values.back();
  const double w = pc - static_cast<double>(i);
  return (1.0 - w) * values[i] + w * values[i + 1];
}

WaveState gaussian_ic(GridPtr grid, double x0, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  WaveState w(grid);
  const double amp = 1.0 / std::sqrt(2.0 * std::numbers::pi * sigma * sigma);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = grid->x(i) - x0;
    w.u[i] = amp * std::exp(-d * d / (2.0 * sigma * sigma));
  }
  return w;
}

WaveState rect_ic(GridPtr grid, double x0, double L) {
  if (!(L > 0.0)) throw std::invalid_argument("L must be positive");
  WaveState w(grid);
  // Closed indicator; a small relative slack catches nodes that sit on the
  // jump up to roundoff.
  const double edge = L * (1.0 + 1e-12);
  for (std::size_t i = 0; i < w.size(); ++i)
    w.u[i] = std::abs(grid->x(i) - x0) <= edge ? 1.0 : 0.0;
  return w;
}

WaveState zero_ic(GridPtr grid) { return WaveState(std::move(grid)); }

WaveState combine(const WaveState& a, const WaveState& b, double s) {
  a.check_consistent();
  b.check_consistent();
  if (a.size() != b.size()) throw std::invalid_argument("states live on different grids");
  WaveState r = a;
  for (std::size_t i = 0; i < r.size(); ++i) {
    r.eta[i] += s * b.eta[i];
    r.u[i] += s * b.u[i];
  }
  return r;
}

double l2_diff(const TimeSeries& a, const TimeSeries& b) {
  if (a.size() != b.size() || std::abs(a.dt - b.dt) > 1e-12 * a.dt ||
      std::abs(a.t0 - b.t0) > 1e-12 * std::max(1.0, std::abs(a.t0)))
    throw std::invalid_argument("time series axes differ");
  double s = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    const double d = a.values[n] - b.values[n];
    s += d * d;
  }
  return std::sqrt(s * a.dt);
}

double l2_norm(const TimeSeries& a) {
  double s = 0.0;
  for (double v : a.values) s += v * v;
  return std::sqrt(s * a.dt);
}

double l2_nodes(std::span<const double> f, double dx) {
  double s = 0.0;
  for (double v : f) s += v * v;
  return std::sqrt(s * dx);
}

}  // namespace hsw
