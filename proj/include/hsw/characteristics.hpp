#pragma once

#include <utility>
#include <vector>

#include "hsw/core.hpp"

namespace hsw {

// Piecewise linear function on uniformly spaced abscissae, zero outside.
class SampledFunction {
 public:
  SampledFunction(double x_first, double dx, std::vector<double> values);
  SampledFunction(const Grid1D& grid, std::vector<double> values);

  double operator()(double x) const;
  double x_first() const { return x0_; }
  double x_last() const;

 private:
  double x0_, dx_;
  std::vector<double> v_;
};

enum class Side { Plus, Minus };

// d'Alembert solution of the whole-line Saint-Venant problem.
WaveState sv_cauchy_exact(const WaveState& w0, double t, const PhysParams& params);

// Saint-Venant half-line solution driven by the velocity trace u_gamma at
// x = 0 with zero initial data.  Returns physical (eta, u).
std::pair<double, double> sv_halfline(const TimeSeries& u_gamma, double x, double t, Side side,
                                      const PhysParams& params);

// Same, evaluated on every node of the given side (x >= 0 for Plus,
// x < 0 for Minus); other nodes are left at zero.
WaveState sv_halfline_state(const TimeSeries& u_gamma, GridPtr grid, double t, Side side,
                            const PhysParams& params);

}  // namespace hsw
