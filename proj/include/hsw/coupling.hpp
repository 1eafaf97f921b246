#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "hsw/characteristics.hpp"
#include "hsw/core.hpp"
#include "hsw/laplace_halfline.hpp"
#include "hsw/spectral_cauchy.hpp"

namespace hsw {

// r(s) = (lambda_- - lambda_+) / (lambda_- + lambda_+) with the roots of the
// operators on each side of the interface.  Evaluated in a cancellation free
// form so that it stays accurate for |mu s| down to roundoff.
cplx reflection_coeff(cplx s, const PhysParams& params);
// Plain evaluation from the two roots (reference implementation).
cplx reflection_coeff_direct(cplx s, const PhysParams& params);

// Reflection coefficients on the dispersion curve of the upstream operator.
double filter_bsv(double kappa, double mu);
cplx filter_svb(double kappa, double mu);
double reflection_filter_modulus(double kappa, double mu, CouplingCase c);

// Time step of the analytic traces: x/c delays of whole cells fall on samples.
inline constexpr int kTraceSubsteps = 7;
double analytic_time_step(const Grid1D& grid, const PhysParams& params);
std::size_t analytic_sample_count(double t_end, double dt);

// Solution made of a whole-line Cauchy problem upstream (x < 0) whose x = 0
// velocity trace drives the downstream half-line problem.  Both the one-way
// reference and the hybrid reconstruction have this structure; they differ
// only in the upstream initial data.
class InterfaceSolution {
 public:
  // With pad_upstream the upstream Cauchy problem is solved on a zero-padded
  // copy of the grid, c t_end wider on each side, so nothing that leaves the
  // grid can re-enter it through the periodic boundary before t_end.
  InterfaceSolution(const WaveState& upstream_data, const PhysParams& params, double t_end, bool pad_upstream = false);

  WaveState upstream_at(double t) const;    // whole line
  WaveState downstream_at(double t) const;  // x >= 0, zero elsewhere
  WaveState at(double t) const;             // upstream on x < 0, downstream on x >= 0
  const TimeSeries& trace() const { return trace_; }
  // u at a fixed abscissa on the analytic time grid, from the representation
  // valid on that side of the interface.
  TimeSeries upstream_trace_u(double x) const;
  TimeSeries downstream_trace_u(double x) const;
  const PhysParams& params() const { return params_; }
  GridPtr grid() const { return grid_; }

 private:
  GridPtr grid_;
  PhysParams params_;
  double t_end_;
  std::size_t pad_ = 0;  // cells added on each side of the upstream grid
  CauchyPropagator upstream_;
  TimeSeries trace_;
  std::unique_ptr<HalfLineSolver> downstream_;  // only when the downstream side is dispersive
};

struct OneWaySolution {
  std::vector<double> times;
  std::vector<WaveState> minus;     // Cauchy solution of the upstream operator
  std::vector<WaveState> plus;      // half-line solution, x >= 0
  std::vector<WaveState> combined;  // W* assembled on the whole grid
  TimeSeries trace;                 // u*(0, t)
};

// Rejects data with more than 1e-8 of its mass on x > 0; warns above 1e-12.
void check_upstream_support(const WaveState& w0);

OneWaySolution one_way_solve(const WaveState& w0, const PhysParams& params, const std::vector<double>& times);

WaveState reflected_ic_bsv(const WaveState& w0, const PhysParams& params);
WaveState reflected_ic_svb(const WaveState& w0, const PhysParams& params);
WaveState reflected_ic(const WaveState& w0, const PhysParams& params);

// u'(0, t) = L^{-1}(r L u*(0, .)) on the analytic time grid, from the exact
// upstream trace of w0.
TimeSeries reflection_trace(const WaveState& w0, const PhysParams& params, double t_end);
TimeSeries apply_reflection_filter(const TimeSeries& trace, const PhysParams& params);

struct HybridAnalytic {
  std::vector<double> times;
  std::vector<WaveState> snapshots;  // W = W* + W'
  TimeSeries trace;                  // u(0, t)
  WaveState reflected_data;          // W'_0, upstream initial data of the reflection
};

HybridAnalytic hybrid_analytic(const WaveState& w0, const PhysParams& params, const std::vector<double>& times);

// L2-in-time size of the jumps of u and u_x across x = 0, each side
// estimated from its own three nearest nodes.
struct InterfaceJumps {
  double dx = 0.0;
  double jump_u = 0.0;
  double jump_ux = 0.0;
  double scale_u = 0.0;  // L2 of u(0, .) for reference
};
InterfaceJumps coupling_jumps(const WaveState& w0, const PhysParams& params, double t_end);

// (eta, u)(x) -> (eta, -u)(-x).  Requires a symmetric grid.
WaveState mirror(const WaveState& w);

struct SplitSolution {
  std::vector<double> times;
  std::vector<WaveState> w_star;   // one-way reference of both halves
  std::vector<WaveState> hybrid;   // hybrid solution W
  std::vector<WaveState> w_prime;  // W - W*
};

SplitSolution split_and_superpose(const WaveState& w0, const PhysParams& params, const std::vector<double>& times);

enum class Region { Minus, Plus, All };

// sqrt( sum_n w_n sum_i dx (d_eta^2 + (s d_u)^2) ) over the region, with
// trapezoid weights in time and s the velocity scale of params.
double coupling_error_norm(const std::vector<WaveState>& w, const std::vector<WaveState>& w_star, Region region,
                           const PhysParams& params);

}  // namespace hsw
