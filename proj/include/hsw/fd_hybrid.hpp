#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hsw/core.hpp"

namespace hsw {

// Fourth-order centred first and second derivatives.  Output is zero on the
// two outermost nodes of each side, where the stencil does not fit.
std::vector<double> dx4(std::span<const double> f, double dx);
std::vector<double> dxx4(std::span<const double> f, double dx);

// Which nodes carry the dispersive term.
enum class ChiProfile { Hybrid, AllBoussinesq, AllSaintVenant };

std::vector<double> make_chi(const Grid1D& grid, const PhysParams& params, ChiProfile profile);

// (I - mu^2 chi D2) on the interior nodes, ghost values pinned to zero,
// factorised once (banded LU without pivoting).
class BandedOperator {
 public:
  BandedOperator(const Grid1D& grid, std::span<const double> chi, double mu);

  // Solves for u given q; ghost entries of the result are zero.
  std::vector<double> solve(std::span<const double> q) const;
  void solve_into(std::span<const double> q, std::span<double> u) const;
  std::vector<double> apply(std::span<const double> u) const;
  std::size_t unknowns() const { return m_; }

 private:
  std::size_t offset_, m_, total_;
  double mu_, dx_;
  std::vector<double> chi_;
  // band_[5*i + (j - i + 2)] holds entry (i, j) of the interior system
  std::vector<double> band_;
  std::vector<double> lu_;
};

struct HybridState {
  std::vector<double> eta;
  std::vector<double> q;
  std::vector<double> u;
  std::vector<double> chi;
  double time = 0.0;
};

std::vector<double> recover_u(std::span<const double> q, const BandedOperator& op);

HybridState make_hybrid_state(const WaveState& w0, const PhysParams& params, ChiProfile profile,
                              const BandedOperator& op);

// One SSP-RK3 step with u recovered from q at every stage.
HybridState rk3_step(const HybridState& state, const PhysParams& params, double dt, const BandedOperator& op,
                     double dx);

struct HybridRunOptions {
  ChiProfile profile = ChiProfile::Hybrid;
  double cfl = 0.15;
  std::vector<double> snapshot_times;
  // Node index of the trace probe; defaults to the first node with x >= 0.
  std::optional<std::size_t> probe_index;
  // Further nodes whose u is recorded every step.
  std::vector<std::size_t> extra_probes;
};

struct HybridRun {
  std::vector<WaveState> snapshots;  // at the step nearest each requested time
  TimeSeries trace;                  // u at the probe, every step
  std::vector<TimeSeries> extra_traces;
  double dt = 0.0;
  std::size_t steps = 0;
};

// Time step: the largest dt = t_end / N not exceeding cfl * dx / c.
double fd_time_step(const Grid1D& grid, const PhysParams& params, double cfl, double t_end);

HybridRun run_hybrid(const WaveState& w0, const PhysParams& params, double t_end, const HybridRunOptions& opts);

// Discrete energy sum_i (g eta^2 + h0 u q) dx, conserved by the semi-discrete scheme.
double discrete_energy(const HybridState& s, const PhysParams& params, double dx);

}  // namespace hsw
