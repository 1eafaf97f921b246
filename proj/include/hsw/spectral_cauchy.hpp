#pragma once

#include <array>
#include <utility>
#include <vector>

#include "hsw/core.hpp"
#include "hsw/fft.hpp"

namespace hsw {

// Fourier coefficients of a state on the periodic torus [x_min, x_max).
// Bin k holds f_hat_k = (1/n) sum_j f_j exp(-i kappa_k (x_j - x_ref)).
struct SpectralField {
  std::vector<double> kappa;
  std::vector<cplx> eta_hat;
  std::vector<cplx> u_hat;
  double dk = 0.0;
  double x_ref = 0.0;
  std::size_t n() const { return kappa.size(); }
};

// Per-wavenumber diagonalisation of the Fourier symbol, in scaled variables
// (eta, u~).  Columns of S are the eigenvectors (-psi, 1) and (psi, 1) with
// eigenvalues +i omega and -i omega, psi = sqrt(1 + mu^2 kappa^2).
struct SpectralDecomposition {
  double kappa = 0.0;
  double omega = 0.0;
  std::array<cplx, 4> S{};      // row major
  std::array<cplx, 4> S_inv{};  // row major
  std::array<cplx, 2> J_diag{};
};

double dispersion_b(double kappa, double mu, double c = 1.0);
SpectralDecomposition decompose_b(double kappa, double mu, double c = 1.0);

// Wavenumber of bin k for an n-point periodic grid of spacing dx.
std::vector<double> wavenumbers(std::size_t n, double dx);

SpectralField snapshot_spectrum(const WaveState& w);
// Inverse of snapshot_spectrum onto a grid compatible with the field.
WaveState spectrum_to_state(const SpectralField& f, GridPtr grid, double time);

// Energy with the velocity taken as stored (nondimensional use).
double energy_norm_b(const SpectralField& spec, double mu);
// Energy of a dimensional state; the velocity is rescaled by sqrt(h0/g).
double energy_norm_b(const SpectralField& spec, const PhysParams& params);

struct CauchyOptions {
  // Reject times for which a wave could wrap around the periodic domain.
  bool enforce_window = true;
};

// Exact evolution of the whole-line problem with shallowness params.mu
// (mu = 0 is the Saint-Venant system), sampled on the grid of w0.
class CauchyPropagator {
 public:
  CauchyPropagator(const WaveState& w0, const PhysParams& params, CauchyOptions opts = {});

  WaveState at(double t) const;
  // (eta, u) at a fixed abscissa sampled at t_n = n dt, n = 0..n_samples-1.
  std::pair<TimeSeries, TimeSeries> trace(double x, double dt, std::size_t n_samples) const;
  TimeSeries trace_u(double x, double dt, std::size_t n_samples) const;
  const SpectralField& initial_spectrum() const { return spec0_; }
  const PhysParams& params() const { return params_; }

 private:
  void check_window(double t) const;
  GridPtr grid_;
  PhysParams params_;
  CauchyOptions opts_;
  SpectralField spec0_;
  // Modal amplitudes in scaled variables, per bin.
  std::vector<cplx> a1_, a2_;
  std::vector<double> psi_, omega_;
};

WaveState evolve_b_cauchy(const WaveState& w0, const PhysParams& params, double t,
                          CauchyOptions opts = {});

}  // namespace hsw
