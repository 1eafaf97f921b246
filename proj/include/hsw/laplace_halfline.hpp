#pragma once

#include <array>
#include <utility>
#include <vector>

#include "hsw/characteristics.hpp"
#include "hsw/core.hpp"
#include "hsw/fft.hpp"

namespace hsw {

// Decaying root of lambda^2 = (s/c)^2 / (1 + (mu s / c)^2), Re lambda > 0.
cplx lambda_b(cplx s, double mu, double c = 1.0);

// Mode vectors in scaled variables (eta, u~): v1 decays towards x -> +inf
// as exp(-lambda x), v2 = diag(-1, 1) v1 decays towards x -> -inf.
std::pair<std::array<cplx, 2>, std::array<cplx, 2>> eigvecs_halfline(cplx s, double mu, double c = 1.0);

// Samples of the Laplace transform on the line Re s = sigma:
//   coeffs_k ~= int_0^inf f(t) exp(-s_k t) dt,  s_k = sigma + i omega_k,
// computed from a zero-extended sampled signal.
struct LaplaceSignal {
  double sigma = 0.0;
  double dt = 0.0;
  std::size_t n_samples = 0;  // length of the original signal
  std::size_t n_pad = 1;      // zero extension factor
  std::vector<double> omega;
  std::vector<cplx> coeffs;

  std::size_t size() const { return coeffs.size(); }
  cplx s(std::size_t k) const { return {sigma, omega[k]}; }
  double t_padded() const { return dt * static_cast<double>(size()); }
};

// sigma = 3 ln(10) / T_padded, i.e. the window end is damped by 1e-3.
double default_sigma(double t_padded);

LaplaceSignal damped_fft(const TimeSeries& trace, double sigma, std::size_t pad_factor = 20);
LaplaceSignal damped_fft(const TimeSeries& trace, std::size_t pad_factor = 20);
// Returns the first n_samples samples of the inverse transform.
TimeSeries damped_ifft(const LaplaceSignal& sig);

// Throws SolverError when 1 + (mu s / c)^2 nearly vanishes on the axis.
void check_pole_distance(const LaplaceSignal& sig, double mu, double c);

// Velocity and elevation series at one abscissa.
struct HalfLineProbe {
  double x = 0.0;
  TimeSeries eta;
  TimeSeries u;
};

struct HalfLineField {
  Side side = Side::Plus;
  std::vector<HalfLineProbe> probes;
};

// Half-line Boussinesq problem (mu = 0 gives Saint-Venant) with zero
// initial data, driven by the velocity trace at x = 0.
class HalfLineSolver {
 public:
  HalfLineSolver(const TimeSeries& u_gamma, const PhysParams& params, double mu, Side side,
                 std::size_t pad_factor = 20);

  HalfLineProbe probe(double x) const;
  // Snapshot at time t on nodes x_i = +-i dx, i = 0..n_nodes-1 (sign by side).
  std::pair<std::vector<double>, std::vector<double>> snapshot(double t, double dx, std::size_t n_nodes,
                                                               double tol = 1e-13) const;
  const LaplaceSignal& signal() const { return sig_; }
  Side side() const { return side_; }

 private:
  PhysParams params_;
  double mu_;
  Side side_;
  LaplaceSignal sig_;
  std::vector<cplx> lambda_;
  std::vector<cplx> ratio_;  // first component of the mode vector
};

HalfLineField evolve_b_halfline(const TimeSeries& u_gamma, const PhysParams& params,
                                const std::vector<double>& xs, Side side = Side::Plus);

}  // namespace hsw
