#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hsw {

// Which operator sits on which side of the interface x = 0.
// BSV: Boussinesq on x < 0, Saint-Venant on x >= 0.  SVB: the reverse.
enum class CouplingCase { BSV, SVB };

std::string to_string(CouplingCase c);
CouplingCase coupling_case_from_string(const std::string& s);

struct PhysParams {
  double h0 = 1.0;
  double g = 9.81;
  double mu = 1.0 / 1.7320508075688772;
  CouplingCase coupling = CouplingCase::BSV;
  bool dimensional = true;

  // mu = h0/sqrt(3).
  static PhysParams from_depth(double h0, CouplingCase coupling, double g = 9.81);
  // g = h0 = 1, mu free.
  static PhysParams nondimensional(double mu, CouplingCase coupling);

  double wave_speed() const;
  // Factor s with u_scaled = s*u such that the system reads
  // eta_t + c u~_x = 0, (1 - mu^2 d_xx) u~_t + c eta_x = 0.
  double velocity_scale() const;
  // Shallowness of the operator on either side (0 on the Saint-Venant side).
  double mu_minus() const;
  double mu_plus() const;
  PhysParams with_mu(double new_mu) const;
};

class Grid1D {
 public:
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double dx() const { return dx_; }
  // Number of cells between x_min and x_max; nodes in [x_min, x_max] = cells + 1.
  std::size_t n_interior() const { return n_cells_; }
  std::size_t n_ghost() const { return n_ghost_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  double x(std::size_t i) const { return nodes_[i]; }

  std::size_t first_interior() const { return n_ghost_; }
  std::size_t last_interior() const { return n_ghost_ + n_cells_; }
  // Last node with x < 0.
  std::size_t interface_index() const { return i_star_; }
  // True when some node coincides with x = 0 (within roundoff).
  bool has_origin_node() const;
  // True when the node set is mirror symmetric about x = 0.
  bool is_symmetric() const;
  // Index of the node closest to x.
  std::size_t nearest(double x) const;

  friend Grid1D make_grid(double x_min, double x_max, double dx, std::size_t n_ghost);

 private:
  Grid1D() = default;
  double x_min_ = 0, x_max_ = 0, dx_ = 0;
  std::size_t n_cells_ = 0, n_ghost_ = 0, i_star_ = 0;
  std::vector<double> nodes_;
};

Grid1D make_grid(double x_min, double x_max, double dx, std::size_t n_ghost);

using GridPtr = std::shared_ptr<const Grid1D>;

struct WaveState {
  GridPtr grid;
  std::vector<double> eta;
  std::vector<double> u;
  double time = 0.0;

  WaveState() = default;
  explicit WaveState(GridPtr g, double t = 0.0);

  std::size_t size() const { return eta.size(); }
  bool all_finite() const;
  void check_consistent() const;
};

struct TimeSeries {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<double> values;
  double location = 0.0;

  TimeSeries() = default;
  TimeSeries(double t0_, double dt_, std::vector<double> v, double loc = 0.0);

  std::size_t size() const { return values.size(); }
  double time(std::size_t n) const { return t0 + dt * static_cast<double>(n); }
  double t_end() const { return values.empty() ? t0 : time(values.size() - 1); }
  std::vector<double> times() const;
  // Linear interpolation; 0 outside [t0, t_end].
  double sample(double t) const;
};

WaveState gaussian_ic(GridPtr grid, double x0, double sigma);
WaveState rect_ic(GridPtr grid, double x0, double L);
WaveState zero_ic(GridPtr grid);

// a + s b on a shared grid; time taken from a.
WaveState combine(const WaveState& a, const WaveState& b, double s = 1.0);

// sqrt(sum (a-b)^2 dt); axes must agree.
double l2_diff(const TimeSeries& a, const TimeSeries& b);
double l2_norm(const TimeSeries& a);

// Discrete L2 over nodes, sqrt(sum f^2 dx).
double l2_nodes(std::span<const double> f, double dx);

}  // namespace hsw
