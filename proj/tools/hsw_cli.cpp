// Command line front end: simulate, converge, filters, compare.

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <cmath>
#include <fstream>
#include <iostream>

#include "hsw/coupling.hpp"
#include "hsw/errors.hpp"
#include "hsw/harness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitFit = 4;

int cmd_simulate(const std::string& path) {
  const hsw::ExperimentConfig cfg = hsw::load_config(path);
  const hsw::BundleSummary s = hsw::run_experiment(cfg);
  for (const auto& f : s.files) std::cout << f.string() << '\n';
  std::cout << fmt::format("u' on x<0: measured {:.6e}, predicted {:.6e}, relative discrepancy {:.4e}\n",
                           s.u_prime_measured_l2, s.u_prime_predicted_l2, s.relative_discrepancy);
  return 0;
}

int cmd_converge(const std::string& case_name, const std::string& ic_name, bool full, double dx, std::size_t fd_checks,
                 const std::string& out) {
  const hsw::CouplingCase c = hsw::coupling_case_from_string(case_name);
  const hsw::IcKind ic = hsw::ic_kind_from_string(ic_name);
  hsw::ConvergenceOptions o;
  o.dx = dx > 0.0 ? dx : (full ? 0.025 : 0.1);
  o.fd_checks = fd_checks;
  const auto h0 = full ? hsw::full_sweep() : hsw::desk_sweep();
  const hsw::ConvergenceReport r = hsw::convergence_study(c, ic, h0, o);
  std::cout << "h0,mu,error\n";
  for (std::size_t k = 0; k < r.h0_values.size(); ++k)
    std::cout << hsw::format_number(r.h0_values[k]) << ',' << hsw::format_number(r.mu_values[k]) << ','
              << hsw::format_number(r.error_norms[k]) << '\n';
  std::cout << fmt::format("p = {:.4f}  c = {:.6e}  r^2 = {:.6f}  ({:.1f} s)\n", r.fit.exponent, r.fit.prefactor,
                           r.fit.r_squared, r.seconds);
  for (const auto& f : r.fd_checks)
    std::cout << fmt::format("fd check h0 = {:.3e}: analytic {:.6e}, fd {:.6e}, rel. diff {:.3e}\n", f.h0, f.analytic,
                             f.fd, f.relative_difference);
  if (!out.empty()) {
    std::ofstream f(out);
    f << hsw::report_to_json(r).dump(2) << '\n';
  }
  return 0;
}

int cmd_filters(double h0, const std::string& case_name, double kmax, std::size_t n) {
  if (!(h0 > 0.0)) throw hsw::ConfigError("h0 must be positive");
  if (n < 2) throw hsw::ConfigError("need at least two points");
  const hsw::CouplingCase c = hsw::coupling_case_from_string(case_name);
  const double mu = h0 / std::sqrt(3.0);
  if (!(kmax > 0.0)) kmax = 4.0 / mu;
  std::cout << "kappa,r_abs,r_re,r_im\n";
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = kmax * static_cast<double>(k) / static_cast<double>(n - 1);
    const std::complex<double> r = c == hsw::CouplingCase::BSV ? std::complex<double>(hsw::filter_bsv(kk, mu))
                                                               : hsw::filter_svb(kk, mu);
    std::cout << hsw::format_number(kk) << ',' << hsw::format_number(std::abs(r)) << ','
              << hsw::format_number(r.real()) << ',' << hsw::format_number(r.imag()) << '\n';
  }
  return 0;
}

int cmd_compare(const std::string& path) {
  const hsw::ExperimentConfig cfg = hsw::load_config(path);
  const auto rows = hsw::compare_solvers(cfg);
  bool ok = true;
  std::cout << "pair,discrepancy,tolerance,result\n";
  for (const auto& r : rows) {
    std::cout << r.name << ',' << hsw::format_number(r.discrepancy) << ',' << hsw::format_number(r.tolerance) << ','
              << (r.pass ? "pass" : "FAIL") << '\n';
    ok = ok && r.pass;
  }
  return ok ? 0 : kExitFit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear Boussinesq / Saint-Venant interface coupling toolkit"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "debug logging");

  std::string config;
  auto* sim = app.add_subcommand("simulate", "run one experiment and write its CSV bundle");
  sim->add_option("--config", config, "experiment JSON")->required();

  std::string case_name = "bsv", ic_name = "gaussian", out;
  bool full = false;
  double dx = 0.0;
  std::size_t fd_checks = 3;
  auto* conv = app.add_subcommand("converge", "coupling error versus depth, log-log fit");
  conv->add_option("--case", case_name)->check(CLI::IsMember({"bsv", "svb"}));
  conv->add_option("--ic", ic_name)->check(CLI::IsMember({"gaussian", "rect"}));
  conv->add_flag("--full-sweep", full, "nine depths 1e-6..1e-2 at dx = 0.025");
  conv->add_option("--dx", dx, "override the grid spacing");
  conv->add_option("--fd-checks", fd_checks, "number of largest-depth points cross-checked with the FD scheme");
  conv->add_option("--out", out, "write the report as JSON");

  double h0 = 1.0, kmax = 0.0;
  std::size_t npts = 401;
  std::string fcase = "bsv";
  auto* filt = app.add_subcommand("filters", "tabulate |r| on the dispersion curve");
  filt->add_option("--h0", h0)->required();
  filt->add_option("--case", fcase)->required()->check(CLI::IsMember({"bsv", "svb"}));
  filt->add_option("--kmax", kmax, "largest wavenumber (default 4/mu)");
  filt->add_option("--n", npts, "number of samples");

  std::string cconfig;
  auto* cmp = app.add_subcommand("compare", "cross-check the solvers on one configuration");
  cmp->add_option("--config", cconfig, "experiment JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::warn);

  try {
    if (*sim) return cmd_simulate(config);
    if (*conv) return cmd_converge(case_name, ic_name, full, dx, fd_checks, out);
    if (*filt) return cmd_filters(h0, fcase, kmax, npts);
    if (*cmp) return cmd_compare(cconfig);
  } catch (const hsw::ConfigError& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  } catch (const hsw::SolverError& e) {
    spdlog::error("{}", e.what());
    return kExitSolver;
  } catch (const hsw::FitError& e) {
    spdlog::error("{}", e.what());
    return kExitFit;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitSolver;
  }
  return 0;
}
