#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <regex>
#include <sstream>

#include "hsw/errors.hpp"
#include "hsw/harness.hpp"

using namespace hsw;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hsw_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

json small_config(const fs::path& out) {
  return json{{"case", "bsv"},
              {"ic", {{"type", "gaussian"}, {"x0", -15.0}, {"sigma", 2.0 / std::sqrt(3.0)}}},
              {"h0", 1.0},
              {"domain", {-40.0, 40.0}},
              {"dx", 0.1},
              {"snapshot_times", {1.0, 2.0}},
              {"output_dir", out.string()}};
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(HSW_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

void write_json(const fs::path& p, const json& j) {
  std::ofstream out(p);
  out << j.dump();
}

}  // namespace

TEST(Config, DefaultsMatchReferenceSetup) {
  const ExperimentConfig c = config_from_json(json::object());
  EXPECT_EQ(c.x_min, -200.0);
  EXPECT_EQ(c.x_max, 200.0);
  EXPECT_EQ(c.dx, 0.025);
  EXPECT_EQ(c.cfl, 0.15);
  EXPECT_NEAR(c.ic.width, 2.0 / std::sqrt(3.0), 1e-15);
  EXPECT_EQ(c.ic.kind, IcKind::Gaussian);
  EXPECT_EQ(c.h0, 1.0);
  EXPECT_EQ(c.effective_snapshot_times().size(), 5u);
  EXPECT_NEAR(c.t_end(), 0.75 * 250.0 / std::sqrt(9.81), 1e-12);
}

TEST(Config, ParsesAllFields) {
  const json j = {{"case", "svb"},
                  {"ic", {{"type", "rect"}, {"x0", -30.0}, {"L", 1.5}}},
                  {"h0", 4.0},
                  {"g", 9.8},
                  {"domain", {-100.0, 100.0}},
                  {"dx", 0.05},
                  {"cfl", 0.1},
                  {"snapshot_times", {1.0, 2.5}},
                  {"probe", -3.0},
                  {"output_dir", "bundle"}};
  const ExperimentConfig c = config_from_json(j);
  EXPECT_EQ(c.coupling, CouplingCase::SVB);
  EXPECT_EQ(c.ic.kind, IcKind::Rect);
  EXPECT_EQ(c.ic.x0, -30.0);
  EXPECT_EQ(c.ic.width, 1.5);
  EXPECT_EQ(c.h0, 4.0);
  EXPECT_EQ(c.g, 9.8);
  EXPECT_EQ(c.x_min, -100.0);
  EXPECT_EQ(c.dx, 0.05);
  EXPECT_EQ(c.cfl, 0.1);
  EXPECT_EQ(c.snapshot_times, (std::vector<double>{1.0, 2.5}));
  EXPECT_EQ(c.probe, -3.0);
  EXPECT_EQ(c.output_dir, "bundle");
  // round trip through the canonical form
  const ExperimentConfig back = config_from_json(json::parse(config_to_json(c).dump()));
  EXPECT_EQ(config_hash(back), config_hash(c));
}

TEST(Config, RejectsUnknownKeysAndBadTypes) {
  EXPECT_THROW(config_from_json(json{{"h00", 1.0}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"ic", {{"type", "gaussian"}, {"L", 1.0}}}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"ic", {{"type", "zero"}, {"x0", 1.0}}}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"ic", {{"type", "triangle"}}}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"h0", "deep"}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"case", "bbb"}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"domain", {-1.0}}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"snapshot_times", {1.0, "x"}}}), ConfigError);
  EXPECT_THROW(config_from_json(json::array()), ConfigError);
}

TEST(Config, ValidationFailures) {
  auto bad = [](json patch) {
    json j = json::object();
    j.update(patch);
    return j;
  };
  EXPECT_THROW(config_from_json(bad({{"h0", -1.0}})), ConfigError);
  EXPECT_THROW(config_from_json(bad({{"dx", 0.0}})), ConfigError);
  EXPECT_THROW(config_from_json(bad({{"cfl", -0.1}})), ConfigError);
  EXPECT_THROW(config_from_json(bad({{"domain", {-200.0, 100.0}}})), ConfigError);
  EXPECT_THROW(config_from_json(bad({{"dx", 0.03}})), ConfigError);
  EXPECT_THROW(config_from_json(bad({{"snapshot_times", {-1.0}}})), ConfigError);
  EXPECT_THROW(config_from_json(bad({{"snapshot_times", {200.0 / std::sqrt(9.81)}}})), ConfigError);
  EXPECT_THROW(config_from_json(bad({{"ic", {{"type", "gaussian"}, {"x0", -5.0}}}})), ConfigError);
  EXPECT_THROW(config_from_json(bad({{"ic", {{"type", "rect"}, {"x0", -199.5}}}})), ConfigError);
  EXPECT_THROW(config_from_json(bad({{"probe", 500.0}})), ConfigError);
  EXPECT_THROW(config_from_json(bad({{"output_dir", ""}})), ConfigError);
  EXPECT_NO_THROW(config_from_json(bad({{"ic", {{"type", "zero"}}}})));
}

TEST(Config, LoadFromFile) {
  const fs::path d = scratch_dir("load");
  EXPECT_THROW(load_config(d / "missing.json"), ConfigError);
  {
    std::ofstream out(d / "broken.json");
    out << "{\"h0\": 1.0,";
  }
  EXPECT_THROW(load_config(d / "broken.json"), ConfigError);
  write_json(d / "ok.json", json{{"h0", 4.0}});
  EXPECT_EQ(load_config(d / "ok.json").h0, 4.0);
}

TEST(Config, HashStableAndSensitive) {
  ExperimentConfig a, b;
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  EXPECT_TRUE(std::regex_match(config_hash(a), std::regex("[0-9a-f]{16}")));
  b.h0 = 4.0;
  EXPECT_NE(config_hash(a), config_hash(b));
  b = a;
  b.ic.width = std::nextafter(a.ic.width, 1.0);
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Csv, NumberFormatRoundTripsExactly) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> e(-300.0, 300.0), m(-1.0, 1.0);
  const std::regex sci("-?[0-9]\\.[0-9]{15,}e[+-][0-9]{2,3}");
  for (int i = 0; i < 2000; ++i) {
    const double v = m(rng) * std::pow(10.0, e(rng));
    const std::string s = format_number(v);
    ASSERT_TRUE(std::regex_match(s, sci)) << s;
    ASSERT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
  }
  EXPECT_TRUE(std::regex_match(format_number(0.0), sci));
  EXPECT_EQ(format_number(-1.5).find(','), std::string::npos);
}

TEST(Csv, WriteLayoutAndErrors) {
  const fs::path d = scratch_dir("csv");
  write_csv(d / "a.csv", {"x", "y"}, {{1.0, 2.0, 3.0}, {0.5, 0.25, 0.125}});
  const auto rows = read_csv(d / "a.csv");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(std::stod(rows[3][1]), 0.125);
  EXPECT_THROW(write_csv(d / "b.csv", {"x"}, {{1.0}, {2.0}}), std::invalid_argument);
  EXPECT_THROW(write_csv(d / "b.csv", {"x", "y"}, {{1.0}, {2.0, 3.0}}), std::invalid_argument);
}

TEST(Fit, ExactPowerLawAndSelfTest) {
  EXPECT_NO_THROW(regression_self_test());
  std::vector<double> x, y;
  for (int k = 0; k < 6; ++k) {
    x.push_back(std::pow(10.0, -5.0 + 0.5 * k));
    y.push_back(3.7 * std::pow(x.back(), 1.5));
  }
  const PowerLawFit f = fit_power_law(x, y);
  EXPECT_NEAR(f.exponent, 1.5, 1e-12);
  EXPECT_NEAR(f.prefactor, 3.7, 1e-9);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
  EXPECT_THROW(fit_power_law({1.0}, {1.0}), FitError);
  EXPECT_THROW(fit_power_law({1.0, 2.0}, {1.0, -1.0}), FitError);
  EXPECT_THROW(fit_power_law({2.0, 2.0}, {1.0, 3.0}), FitError);
}

TEST(Fit, NoisyDataLowersRSquared) {
  std::vector<double> x, y;
  for (int k = 0; k < 8; ++k) {
    x.push_back(std::pow(10.0, -4.0 + 0.5 * k));
    y.push_back((k % 2 ? 50.0 : 0.02) * x.back() * x.back());
  }
  EXPECT_LT(fit_power_law(x, y).r_squared, 0.99);
}

TEST(Sweeps, Points) {
  const auto d = desk_sweep(), p = full_sweep();
  ASSERT_EQ(d.size(), 7u);
  ASSERT_EQ(p.size(), 9u);
  EXPECT_NEAR(std::log10(d.front()), -4.5, 1e-12);
  EXPECT_NEAR(std::log10(d.back()), -1.5, 1e-12);
  EXPECT_NEAR(std::log10(p.front()), -6.0, 1e-12);
  EXPECT_NEAR(std::log10(p.back()), -2.0, 1e-12);
  for (std::size_t k = 1; k < p.size(); ++k) EXPECT_NEAR(std::log10(p[k] / p[k - 1]), 0.5, 1e-12);
}

TEST(Convergence, SmallStudyQuadraticAndMonotone) {
  ConvergenceOptions o;
  o.dx = 0.1;
  o.fd_checks = 1;
  const std::vector<double> h = {1e-4, std::pow(10.0, -3.5), 1e-3, std::pow(10.0, -2.5)};
  const ConvergenceReport r = convergence_study(CouplingCase::BSV, IcKind::Gaussian, h, o);
  ASSERT_EQ(r.error_norms.size(), h.size());
  ASSERT_EQ(r.mu_values.size(), h.size());
  for (std::size_t k = 0; k < h.size(); ++k) EXPECT_NEAR(r.mu_values[k], h[k] / std::sqrt(3.0), 1e-18);
  for (std::size_t k = 1; k < h.size(); ++k) EXPECT_GT(r.error_norms[k], r.error_norms[k - 1]);
  EXPECT_NEAR(r.fit.exponent, 2.0, 0.01);
  EXPECT_GT(r.fit.r_squared, 0.999);
  ASSERT_EQ(r.fd_checks.size(), 1u);
  EXPECT_EQ(r.fd_checks[0].h0, h.back());
  // the FD interface carries its own O(dx^4) transmission error
  EXPECT_LT(r.fd_checks[0].relative_difference, 0.05);
  const auto j = report_to_json(r);
  EXPECT_EQ(j["error_norms"].size(), h.size());
  EXPECT_EQ(j["case"], "bsv");
}

TEST(Convergence, Rejections) {
  ConvergenceOptions o;
  o.fd_checks = 0;
  EXPECT_THROW(convergence_study(CouplingCase::BSV, IcKind::Gaussian, {1e-3, 1e-2, 1e-1}, o), ConfigError);
  EXPECT_THROW(convergence_study(CouplingCase::BSV, IcKind::Zero, desk_sweep(), o), ConfigError);
  // r^2 can never reach an impossible threshold, so the rejection path fires
  o.min_r_squared = 1.5;
  EXPECT_THROW(convergence_study(CouplingCase::SVB, IcKind::Gaussian, {1e-4, 3e-4, 1e-3, 3e-3}, o),
               FitError);
}

TEST(Bundle, ZeroInitialDataGivesZeroColumns) {
  const fs::path d = scratch_dir("zero");
  json j = small_config(d);
  j["ic"] = {{"type", "zero"}};
  const BundleSummary s = run_experiment(config_from_json(j));
  ASSERT_EQ(s.files.size(), 2u + 3u);
  for (const auto& f : s.files) EXPECT_TRUE(fs::exists(f)) << f;
  EXPECT_EQ(s.u_prime_measured_l2, 0.0);
  EXPECT_EQ(s.u_prime_predicted_l2, 0.0);
  const auto rows = read_csv(d / "snapshot_00.csv");
  ASSERT_EQ(rows.size(), 1u + 801u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "u_hybrid", "eta_hybrid", "u_oneway", "eta_oneway",
                                               "u_prime_predicted", "u_prime_measured"}));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    ASSERT_NEAR(std::stod(rows[r][0]), -40.0 + 0.1 * static_cast<double>(r - 1), 1e-12);
    for (std::size_t c = 1; c < rows[r].size(); ++c) ASSERT_EQ(std::stod(rows[r][c]), 0.0);
  }
  for (const auto& row : read_csv(d / "trace.csv"))
    if (row[0] != "t")
      for (std::size_t c = 1; c < row.size(); ++c) ASSERT_EQ(std::stod(row[c]), 0.0);
}

TEST(Bundle, ManifestAndLayout) {
  const fs::path d = scratch_dir("manifest");
  const ExperimentConfig cfg = config_from_json(small_config(d));
  const BundleSummary s = run_experiment(cfg);
  std::ifstream in(d / "manifest.json");
  const json m = json::parse(in);
  EXPECT_EQ(m["version"], kVersion);
  EXPECT_EQ(m["config_hash"], config_hash(cfg));
  EXPECT_EQ(m["snapshots"].size(), 2u);
  for (const auto& f : m["snapshots"]) EXPECT_TRUE(fs::exists(d / f.get<std::string>()));
  EXPECT_TRUE(fs::exists(d / m["trace"].get<std::string>()));
  EXPECT_TRUE(fs::exists(d / m["spectrum"].get<std::string>()));
  EXPECT_TRUE(m["tolerances"].contains("reflection_relative_l2"));
  EXPECT_EQ(config_from_json(m["config"]).h0, 1.0);

  const auto trace = read_csv(d / "trace.csv");
  EXPECT_EQ(trace[0], (std::vector<std::string>{"t", "u_hybrid", "u_oneway", "u_prime_measured", "u_prime_predicted"}));
  const auto spec = read_csv(d / "spectrum.csv");
  EXPECT_EQ(spec[0], (std::vector<std::string>{"kappa", "w0_hat_abs", "r_abs"}));
  // the continuous transform of a unit-mass Gaussian is 1/(2 pi) at kappa = 0
  EXPECT_NEAR(std::stod(spec[1][1]), 1.0 / (2 * std::numbers::pi), 1e-10);
  EXPECT_EQ(std::stod(spec[1][2]), 0.0);
  for (std::size_t r = 1; r < spec.size(); ++r) ASSERT_LE(std::stod(spec[r][2]), 1.0);

  // measured column equals u_hybrid - u_oneway
  for (const auto& row : read_csv(d / "snapshot_01.csv")) {
    if (row[0] == "x") continue;
    ASSERT_NEAR(std::stod(row[6]), std::stod(row[1]) - std::stod(row[3]), 1e-15);
  }
  EXPECT_GT(s.u_prime_predicted_l2, 0.0);
}

TEST(Bundle, ByteIdenticalReruns) {
  const fs::path d = scratch_dir("rerun");
  const ExperimentConfig cfg = config_from_json(small_config(d));
  const BundleSummary a = run_experiment(cfg);
  std::vector<std::string> first;
  for (const auto& f : a.files) first.push_back(slurp(f));
  const BundleSummary b = run_experiment(cfg);
  ASSERT_EQ(a.files, b.files);
  for (std::size_t k = 0; k < a.files.size(); ++k) EXPECT_EQ(slurp(b.files[k]), first[k]) << a.files[k];
}

TEST(Compare, RowsAndIdenticalPaths) {
  const fs::path d = scratch_dir("compare");
  json j = small_config(d);
  j["dx"] = 0.025;
  j["snapshot_times"] = {3.0};
  const auto rows = compare_solvers(config_from_json(j));
  std::map<std::string, ComparisonRow> by;
  for (const auto& r : rows) by[r.name] = r;
  for (const char* n : {"sv_spectral_vs_dalembert", "sv_fd_vs_dalembert", "sv_laplace_vs_dalembert",
                        "sv_laplace_vs_transport", "b_fd_vs_spectral", "spectral_repeat", "hybrid_fd_vs_analytic",
                        "reflection_measured_vs_predicted"})
    ASSERT_TRUE(by.count(n)) << n;
  EXPECT_EQ(by["spectral_repeat"].discrepancy, 0.0);
  for (const auto& r : rows) EXPECT_TRUE(r.pass) << r.name << " " << r.discrepancy << " > " << r.tolerance;
}

TEST(Cli, ExitCodes) {
  const fs::path d = scratch_dir("cli");
  const fs::path log = d / "log.txt";
  EXPECT_EQ(run_cli("", log), 2);
  EXPECT_EQ(run_cli("simulate", log), 2);
  EXPECT_EQ(run_cli("simulate --config " + (d / "missing.json").string(), log), 2);
  write_json(d / "unknown.json", json{{"h0", 1.0}, {"colour", "blue"}});
  EXPECT_EQ(run_cli("simulate --config " + (d / "unknown.json").string(), log), 2);
  EXPECT_NE(slurp(log).find("colour"), std::string::npos);
  EXPECT_EQ(run_cli("filters --h0 -1 --case bsv", log), 2);
  EXPECT_EQ(run_cli("converge --case xyz", log), 2);

  EXPECT_EQ(run_cli("filters --h0 1 --case svb --n 5", log), 0);
  const std::string table = slurp(log);
  EXPECT_EQ(table.rfind("kappa,r_abs,r_re,r_im\n", 0), 0u) << table;
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 6);

  json j = small_config(d / "bundle");
  write_json(d / "ok.json", j);
  EXPECT_EQ(run_cli("simulate --config " + (d / "ok.json").string(), log), 0);
  EXPECT_TRUE(fs::exists(d / "bundle" / "manifest.json"));

  // a coarse grid cannot meet the 1e-3 dispersive FD tolerance: acceptance failure
  j["snapshot_times"] = {3.0};
  write_json(d / "coarse.json", j);
  EXPECT_EQ(run_cli("compare --config " + (d / "coarse.json").string(), log), 4);
  EXPECT_NE(slurp(log).find("FAIL"), std::string::npos);
}
