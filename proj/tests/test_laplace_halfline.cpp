#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hsw/characteristics.hpp"
#include "hsw/errors.hpp"
#include "hsw/laplace_halfline.hpp"

using namespace hsw;

namespace {

constexpr double kPi = std::numbers::pi;

TimeSeries gaussian_pulse(double t0, double width, double dt, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double z = (k * dt - t0) / width;
    v[k] = std::exp(-0.5 * z * z);
  }
  return TimeSeries(0.0, dt, v);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// |DFT| of a series at angular frequency w, optionally Hann windowed.
double spectrum_at(const TimeSeries& ts, double w, bool hann) {
  const std::size_t n = ts.size();
  cplx acc(0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double win = hann ? 0.5 - 0.5 * std::cos(2 * kPi * k / (n - 1)) : 1.0;
    acc += win * ts.values[k] * std::exp(cplx(0.0, -w * ts.time(k)));
  }
  return std::abs(acc) * ts.dt;
}

}  // namespace

TEST(Lambda, SaintVenantLimitAndRealAxis) {
  const cplx s(1.0, 2.0);
  EXPECT_EQ(lambda_b(s, 0.0), s);
  const double mu = 0.4;
  double prev = 0.0;
  for (double x = 0.01; x < 1e7; x *= 1.7) {
    const cplx l = lambda_b(cplx(x, 0.0), mu);
    ASSERT_LT(std::abs(l.imag()), 1e-15 * std::abs(l));
    ASSERT_GT(l.real(), prev);
    prev = l.real();
  }
  EXPECT_NEAR(lambda_b(cplx(1e9, 0.0), mu).real(), 1.0 / mu, 1e-9);
  EXPECT_THROW(lambda_b(cplx(0.0, 1.0), mu), std::invalid_argument);
  EXPECT_THROW(lambda_b(cplx(-1.0, 1.0), mu), std::invalid_argument);
}

TEST(Lambda, SolvesCharacteristicEquation) {
  for (double mu : {0.05, 0.5, 2.0})
    for (double sr : {1e-3, 0.1, 1.0})
      for (double si = -50.0; si <= 50.0; si += 0.37) {
        const cplx s(sr, si);
        const cplx l = lambda_b(s, mu);
        ASSERT_GT(l.real(), 0.0);
        const cplx res = l * l * (1.0 + mu * mu * s * s) - s * s;
        ASSERT_LT(std::abs(res), 1e-11 * (1.0 + std::abs(s * s)));
      }
}

TEST(Lambda, BranchContinuityAlongAxis) {
  const double mu = 0.3, sigma = 0.05;
  cplx prev = lambda_b(cplx(sigma, -60.0), mu);
  for (double w = -60.0; w <= 60.0; w += 0.01) {
    const cplx l = lambda_b(cplx(sigma, w), mu);
    ASSERT_LT(std::abs(std::arg(l / prev)), kPi / 2) << w;
    prev = l;
  }
}

TEST(Lambda, EigenvalueBoundsForLargeS) {
  for (double mu : {0.01, 0.3, 1.0}) {
    const double sigma0 = 2.0 / mu;
    for (double sr : {1e-4 / mu, 0.5 / mu, 3.0 / mu})
      for (double si = -400.0 / mu; si <= 400.0 / mu; si += 0.05 / mu) {
        const cplx s(sr, si);
        if (std::abs(s) <= sigma0) continue;
        const cplx l = lambda_b(s, mu);
        ASSERT_GT(l.real(), 0.5 / mu);
        ASSERT_LT(l.real(), 1.5 / mu);
        ASSERT_GT(std::abs(l), 0.5 / mu);
        ASSERT_LT(std::abs(l), 1.5 / mu);
      }
  }
}

TEST(Eigvecs, LimitsAndReflection) {
  auto [a, b] = eigvecs_halfline(cplx(0.3, 2.0), 0.0);
  EXPECT_NEAR(std::abs(a[0] - 1.0), 0.0, 1e-15);
  EXPECT_EQ(a[1], cplx(1.0));
  EXPECT_NEAR(std::abs(b[0] + 1.0), 0.0, 1e-15);
  for (double w : {-5.0, 0.0, 3.0}) {
    auto [v1, v2] = eigvecs_halfline(cplx(0.2, w), 0.7);
    EXPECT_EQ(v2[0], -v1[0]);
    EXPECT_EQ(v2[1], v1[1]);
  }
  auto [big, unused] = eigvecs_halfline(cplx(1e8, 0.0), 0.7);
  EXPECT_LT(std::abs(big[0]), 2e-8);
  EXPECT_EQ(big[1], cplx(1.0));
}

TEST(DampedFft, AxisAndZeroTrace) {
  const TimeSeries z(0.0, 0.01, std::vector<double>(100, 0.0));
  const LaplaceSignal s = damped_fft(z, 0.5, 4);
  ASSERT_EQ(s.size(), 400u);
  for (const auto& c : s.coeffs) ASSERT_EQ(c, cplx(0.0));
  const double dw = 2 * kPi / (400 * 0.01);
  EXPECT_NEAR(s.omega[1], dw, 1e-12);
  EXPECT_NEAR(s.omega[399], -dw, 1e-12);
  EXPECT_NEAR(s.t_padded(), 4.0, 1e-12);
  EXPECT_NEAR(default_sigma(4.0), 3.0 * std::log(10.0) / 4.0, 1e-15);
  EXPECT_THROW(damped_fft(z, 0.0, 4), std::invalid_argument);
  EXPECT_THROW(damped_fft(z, 0.5, 0), std::invalid_argument);
  EXPECT_THROW(damped_fft(TimeSeries(1.0, 0.01, {1.0}), 0.5, 4), std::invalid_argument);
}

TEST(DampedFft, RoundTrip) {
  const TimeSeries f = gaussian_pulse(3.0, 0.4, 0.01, 1000);
  for (std::size_t pad : {1ul, 20ul}) {
    const LaplaceSignal sig = damped_fft(f, pad);
    const TimeSeries back = damped_ifft(sig);
    ASSERT_EQ(back.size(), f.size());
    for (std::size_t k = 0; k < f.size(); ++k) ASSERT_NEAR(back.values[k], f.values[k], 1e-10);
    // re-transform is the identity on the coefficients
    const LaplaceSignal again = damped_fft(back, sig.sigma, pad);
    double m = 0.0, ref = 0.0;
    for (std::size_t k = 0; k < sig.size(); ++k) {
      m = std::max(m, std::abs(again.coeffs[k] - sig.coeffs[k]));
      ref = std::max(ref, std::abs(sig.coeffs[k]));
    }
    EXPECT_LT(m, 1e-10 * ref);
  }
}

TEST(DampedFft, ExponentialTransform) {
  const double dt = 1e-3;
  std::vector<double> v(40000);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::exp(-static_cast<double>(k) * dt);
  const LaplaceSignal sig = damped_fft(TimeSeries(0.0, dt, v), 0.2, 2);
  for (std::size_t k = 0; k < sig.size(); k += 613) {
    const cplx expect = 1.0 / (cplx(sig.sigma + 1.0, sig.omega[k]));
    // the rectangle rule carries an O(dt) offset; aliasing grows near Nyquist
    if (std::abs(sig.omega[k]) > 0.1 * kPi / dt) continue;
    ASSERT_LT(std::abs(sig.coeffs[k] - expect), 1e-3) << sig.omega[k];
  }
}

TEST(DampedFft, PoleProximityRejected) {
  const TimeSeries f = gaussian_pulse(1.0, 0.1, 0.01, 500);
  const LaplaceSignal sig = damped_fft(f, 1e-12, 1);
  const double mu = 1.0 / sig.omega[7];
  EXPECT_THROW(check_pole_distance(sig, mu, 1.0), SolverError);
  EXPECT_NO_THROW(check_pole_distance(damped_fft(f, std::size_t{1}), mu, 1.0));
}

TEST(HalfLine, ZeroTraceGivesZeroField) {
  const PhysParams p = PhysParams::from_depth(1.0, CouplingCase::SVB);
  const TimeSeries z(0.0, 0.01, std::vector<double>(300, 0.0));
  const HalfLineField f = evolve_b_halfline(z, p, {0.0, 1.0, 5.0});
  for (const auto& pr : f.probes) {
    EXPECT_EQ(max_abs(pr.u.values), 0.0);
    EXPECT_EQ(max_abs(pr.eta.values), 0.0);
  }
}

TEST(HalfLine, SaintVenantLimitMatchesTransport) {
  for (Side side : {Side::Plus, Side::Minus}) {
    const PhysParams p = PhysParams::from_depth(2.0, CouplingCase::SVB).with_mu(0.0);
    const double c = p.wave_speed(), dt = 0.005;
    const TimeSeries ug = gaussian_pulse(4.0, 0.5, dt, 4000);
    const double sg = side == Side::Plus ? 1.0 : -1.0;
    std::vector<double> xs;
    for (int m : {0, 37, 400, 1000}) xs.push_back(sg * m * dt * c);
    const HalfLineField f = evolve_b_halfline(ug, p, xs, side);
    for (const auto& pr : f.probes) {
      double num = 0.0, den = 0.0;
      for (std::size_t k = 0; k < ug.size(); ++k) {
        const auto [e, u] = sv_halfline(ug, pr.x, ug.time(k), side, p);
        num += (pr.u.values[k] - u) * (pr.u.values[k] - u) + (pr.eta.values[k] - e) * (pr.eta.values[k] - e);
        den += ug.values[k] * ug.values[k];
      }
      EXPECT_LT(std::sqrt(num / den), 1e-6) << pr.x;
    }
  }
}

TEST(HalfLine, BoundaryTraceReproduced) {
  const PhysParams p = PhysParams::from_depth(1.0, CouplingCase::SVB);
  const TimeSeries ug = gaussian_pulse(3.0, 0.3, 0.004, 3000);
  const HalfLineSolver solver(ug, p, p.mu, Side::Plus);
  const HalfLineProbe pr = solver.probe(0.0);
  EXPECT_LT(l2_diff(pr.u, ug) / l2_norm(ug), 1e-8);
  const auto [eta, u] = solver.snapshot(4.0, 0.05, 10);
  EXPECT_NEAR(u[0], ug.sample(4.0), 1e-8);
}

TEST(HalfLine, SnapshotAgreesWithProbes) {
  const PhysParams p = PhysParams::from_depth(1.0, CouplingCase::SVB);
  const double dt = 0.004;
  const TimeSeries ug = gaussian_pulse(3.0, 0.3, dt, 3000);
  for (Side side : {Side::Plus, Side::Minus}) {
    const HalfLineSolver solver(ug, p, p.mu, side);
    const std::size_t n = 2000;
    const double t = 2000 * dt;
    const auto [eta, u] = solver.snapshot(t, 0.01, 800);
    const double sg = side == Side::Plus ? 1.0 : -1.0;
    for (std::size_t i : {0ul, 5ul, 301ul, 799ul}) {
      const HalfLineProbe pr = solver.probe(sg * i * 0.01);
      ASSERT_NEAR(u[i], pr.u.values[n], 1e-9);
      ASSERT_NEAR(eta[i], pr.eta.values[n], 1e-9);
    }
  }
}

TEST(HalfLine, CausalityAheadOfFastestWave) {
  // The dispersive operator responds instantly with weight ~exp(-x/mu), and
  // the dispersive front has an exponential precursor of width
  // (1.5 mu^2 x)^(1/3); probe far away and let the pulse start late.
  const PhysParams p = PhysParams::nondimensional(0.05, CouplingCase::SVB);
  const TimeSeries ug = gaussian_pulse(4.0, 0.2, 0.002, 10000);
  const double x = 5.0;
  const HalfLineField f = evolve_b_halfline(ug, p, {x});
  const auto& u = f.probes[0].u;
  const double ref = max_abs(ug.values);
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u.time(k) >= x / p.wave_speed()) break;
    ASSERT_LT(std::abs(u.values[k]), 1e-6 * ref) << u.time(k);
  }
}

TEST(HalfLine, HighFrequenciesFiltered) {
  const double mu = 0.5;
  const PhysParams p = PhysParams::nondimensional(mu, CouplingCase::SVB);
  const TimeSeries ug = gaussian_pulse(3.0, 0.05, 0.005, 16000);
  const HalfLineField f = evolve_b_halfline(ug, p, {10 * mu});
  const TimeSeries& u = f.probes[0].u;
  // the output keeps ringing near omega = 1/mu until the end, hence the window
  double in_peak = 0.0, in_high = 0.0, out_peak = 0.0, out_high = 0.0;
  for (double w = 0.0; w < 40.0; w += 0.05) {
    const double si = spectrum_at(ug, w, false), so = spectrum_at(u, w, true);
    in_peak = std::max(in_peak, si);
    out_peak = std::max(out_peak, so);
    if (w > 1.1 / mu) {
      in_high = std::max(in_high, si);
      out_high = std::max(out_high, so);
    }
  }
  EXPECT_GT(in_high, 0.5 * in_peak);
  EXPECT_LT(out_high, 1e-2 * out_peak);
}

TEST(HalfLine, WrongSideRejected) {
  const PhysParams p = PhysParams::from_depth(1.0, CouplingCase::SVB);
  const TimeSeries ug = gaussian_pulse(1.0, 0.2, 0.01, 500);
  const HalfLineSolver plus(ug, p, p.mu, Side::Plus);
  EXPECT_THROW(plus.probe(-1.0), std::invalid_argument);
  const HalfLineSolver minus(ug, p, p.mu, Side::Minus);
  EXPECT_THROW(minus.probe(1.0), std::invalid_argument);
}
