#pragma once

#include "arlad/asymptotics.hpp"
#include "arlad/dgp.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace arlad {

enum class Scale { desk, paper };

/// Replications per cell when a cell leaves R unset: 500 at desk scale,
/// 1000 at paper scale.
int default_replications(Scale scale);
Scale parse_scale(std::string_view text);
std::string_view name(Scale scale);

/// eps_t = g(t/n) u_t with GARCH(1,1) u_t.
struct ErrorModel {
  std::string profile = "abrupt";  // abrupt | gradual | periodic
  double delta = 0.2;
  GarchParams garch;
  ErrorDist dist = ErrorDist::std_laplace;
  int burn_in = 500;
};

/// AR(1) estimation experiment: y_t = theta0 y_{t-1} + eps_t.
struct EstimationCell {
  std::string label;
  ErrorModel errors;
  Eigen::Index n = 200;
  double theta0 = 0.5;
  std::vector<std::string> estimators{"lade", "alade_feasible"};
  std::optional<int> R;
  /// Bootstrap size for AE; 0 skips the bootstrap.
  int J = 500;
  bool intercept = false;
};

/// Testing experiment on y_t = 0.5 y_{t-1} + kappa y_{t-2} + eps_t: Wald test
/// of phi_2 = 0 in an AR(2) fit and the sign portmanteau test of an AR(1) fit.
struct TestCell {
  std::string label;
  ErrorModel errors;
  Eigen::Index n = 200;
  double kappa = 0.0;
  std::vector<std::string> estimators{"lade", "alade_feasible"};
  std::optional<int> R;
  int J = 500;
  int M = 6;
  double level = 0.05;
  bool intercept = false;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t master_seed = 20240501;
  /// Worker threads (0 = default_thread_count()).
  unsigned threads = 0;
  std::vector<EstimationCell> estimation;
  std::vector<TestCell> tests;
};

/// Built-in experiments: table1_sl_iid, table2_sl_iid, table3_sl_iid and the
/// GARCH variants table1_sl_garch, table2_sl_garch, table3_sl_garch.
ExperimentConfig preset_config(std::string_view name);
std::vector<std::string> preset_names();

struct EstimatorStats {
  std::string estimator;
  int R_effective = 0;
  int failures = 0;
  double mean = 0.0;
  /// Root mean squared error about theta0.
  double se = 0.0;
  /// Standard deviation about the Monte-Carlo mean.
  double sd = 0.0;
  /// Mean bootstrap standard error, when bootstrapped.
  std::optional<double> ae;
  /// Share of replications whose theta0 +- 1.96 bootstrap SE covers theta0.
  std::optional<double> coverage;
  /// Replications whose bootstrap dropped more than 5% of its refits.
  int bootstrap_warnings = 0;
};

/// Summary over replications; nullopt entries are failed replications.
EstimatorStats summarize_estimates(const std::string& estimator,
                                   const std::vector<std::optional<double>>& estimates,
                                   const std::vector<std::optional<double>>& boot_se,
                                   double theta0);

/// R1 = SD(alade_feasible)/SD(alade_infeasible), R2 = SD(lade)/SD(alse_infeasible),
/// R3 = SD(alade_feasible)/SD(alse_infeasible), R4 = SD(lse)/SD(alse_infeasible).
/// A ratio is nullopt (undefined) when an estimator is missing or its
/// denominator SD is zero.
std::map<std::string, std::optional<double>> efficiency_ratios(
    const std::map<std::string, double>& sd_by_estimator);

/// Share of failed replications above which a cell is invalid.
inline constexpr double kMaxFailureShare = 0.02;

struct EstimationResult {
  EstimationCell cell;
  int R = 0;
  std::vector<EstimatorStats> stats;
  std::map<std::string, std::optional<double>> ratios;
  bool valid = true;
};

struct RejectionRate {
  int rejections = 0;
  int effective = 0;
  int failures = 0;

  double rate() const { return effective > 0 ? static_cast<double>(rejections) / effective : 0.0; }
};

struct TestStats {
  std::string estimator;
  RejectionRate wald;
  RejectionRate portmanteau;
};

struct TestResult {
  TestCell cell;
  int R = 0;
  std::vector<TestStats> stats;
  bool valid = true;
};

EstimationResult run_estimation_cell(const EstimationCell& cell, int R, std::uint64_t seed,
                                     unsigned threads = 0);
TestResult run_test_cell(const TestCell& cell, int R, std::uint64_t seed, unsigned threads = 0);

struct SimReport {
  std::string name;
  std::uint64_t master_seed = 0;
  Scale scale = Scale::desk;
  std::vector<EstimationResult> estimation;
  std::vector<TestResult> tests;
};

/// Runs every cell; cell i draws from seeds derived from (master_seed, i), so
/// adding cells does not change earlier ones.
SimReport run_experiment(const ExperimentConfig& config, Scale scale);

struct EfficiencyRow {
  std::optional<double> tau;
  double delta = 0.0;
  EfficiencyConstants b;
};

/// b1..b4 over a delta grid. The abrupt family is the step profile
/// 1 + (delta - 1) I(x >= tau) evaluated for every tau; gradual and periodic
/// ignore tau.
std::vector<EfficiencyRow> run_efficiency_curves(ErrorDist dist, std::string_view family,
                                                 const std::vector<double>& deltas,
                                                 const std::vector<double>& taus = {0.5});

}  // namespace arlad
