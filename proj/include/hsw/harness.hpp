#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hsw/core.hpp"

namespace hsw {

inline constexpr const char* kVersion = "hsw 0.1.0";

enum class IcKind { Gaussian, Rect, Zero };

std::string to_string(IcKind k);
IcKind ic_kind_from_string(const std::string& s);

struct IcSpec {
  IcKind kind = IcKind::Gaussian;
  double x0 = -50.0;
  double width = 1.1547005383792515;  // sigma (Gaussian) or L (rectangle); 2/sqrt(3)
};

struct ExperimentConfig {
  CouplingCase coupling = CouplingCase::BSV;
  IcSpec ic;
  double h0 = 1.0;
  double g = 9.81;
  double x_min = -200.0;
  double x_max = 200.0;
  double dx = 0.025;
  double cfl = 0.15;
  std::vector<double> snapshot_times;  // empty: five evenly spaced up to the default horizon
  double probe = 0.0;
  std::string output_dir = "out";

  PhysParams params() const;
  double default_t_end() const;
  std::vector<double> effective_snapshot_times() const;
  double t_end() const;
  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);

WaveState make_initial_state(const ExperimentConfig& cfg, GridPtr grid);
GridPtr make_experiment_grid(const ExperimentConfig& cfg);

// Horizon used for one-sided experiments: 0.75 (x_max - x0) / c.
double default_horizon(double x_max, double x0, double c);

// ---- CSV -----------------------------------------------------------------

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);
std::string format_number(double v);

// ---- experiment bundle ---------------------------------------------------

struct BundleSummary {
  std::vector<std::filesystem::path> files;
  std::vector<double> snapshot_times;
  double u_prime_measured_l2 = 0.0;   // on x < 0, all snapshots
  double u_prime_predicted_l2 = 0.0;  // on x < 0, all snapshots
  double relative_discrepancy = 0.0;  // |measured - predicted| / |predicted| on x < 0
};

BundleSummary run_experiment(const ExperimentConfig& cfg);

// ---- convergence ---------------------------------------------------------

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
};

// Least squares fit of log y = log c + p log x.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);
// Fits exact data e = mu^2 and throws FitError if p misses 2 by 1e-10.
void regression_self_test();

struct FdCrossCheck {
  double h0 = 0.0;
  double analytic = 0.0;
  double fd = 0.0;
  double relative_difference = 0.0;
};

struct ConvergenceReport {
  CouplingCase coupling = CouplingCase::BSV;
  IcKind ic = IcKind::Gaussian;
  double dx = 0.0;
  std::vector<double> h0_values;
  std::vector<double> mu_values;
  std::vector<double> error_norms;
  PowerLawFit fit;
  std::vector<FdCrossCheck> fd_checks;
  double seconds = 0.0;
};

struct ConvergenceOptions {
  double dx = 0.1;
  std::size_t fd_checks = 3;  // largest-mu points cross-checked against the FD scheme
  unsigned workers = 0;       // 0: hardware concurrency
  double min_r_squared = 0.99;
};

std::vector<double> desk_sweep();  // 10^-4.5 .. 10^-1.5, step 0.5
std::vector<double> full_sweep(); // 10^-6 .. 10^-2, step 0.5

// L2 of u - u* at x = 0 measured in travelled distance: sqrt(c sum dt u'^2).
double coupling_error_at_interface(CouplingCase coupling, const IcSpec& ic, double h0, double dx);
double coupling_error_at_interface_fd(CouplingCase coupling, const IcSpec& ic, double h0, double dx, double cfl);

ConvergenceReport convergence_study(CouplingCase coupling, IcKind ic, const std::vector<double>& h0_list,
                                    const ConvergenceOptions& opts = {});
nlohmann::ordered_json report_to_json(const ConvergenceReport& r);

// ---- solver comparison ---------------------------------------------------

struct ComparisonRow {
  std::string name;
  double discrepancy = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

std::vector<ComparisonRow> compare_solvers(const ExperimentConfig& cfg);

}  // namespace hsw
