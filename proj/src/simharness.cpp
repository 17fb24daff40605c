#include "arlad/simharness.hpp"

#include "arlad/bootstrap.hpp"
#include "arlad/diagnostics.hpp"
#include "arlad/error.hpp"
#include "arlad/estimators.hpp"
#include "arlad/parallel.hpp"

#include <cmath>

namespace arlad {
namespace {

constexpr std::uint16_t kEstimationDomain = 1;
constexpr std::uint16_t kTestDomain = 2;

DGPSpec make_spec(const ErrorModel& e, Eigen::Index n, Eigen::VectorXd phi) {
  DGPSpec spec;
  spec.phi = std::move(phi);
  spec.g = GProfile::from_name(e.profile, e.delta);
  spec.garch = e.garch;
  spec.innovation = e.dist;
  spec.n = n;
  spec.burn_in = e.burn_in;
  return spec;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index, std::uint16_t domain) {
  Stream s(seed, index, Purpose::bootstrap_seed, domain);
  return s.next_u64();
}

std::uint64_t bootstrap_seed(std::uint64_t cell_seed, int rep, std::size_t estimator, int use) {
  Stream s(cell_seed, static_cast<std::uint64_t>(rep), Purpose::bootstrap_seed,
           static_cast<std::uint16_t>(estimator * 4 + use));
  return s.next_u64();
}

std::vector<EstimatorKind> parse_all(const std::vector<std::string>& names) {
  if (names.empty()) throw Error(ErrorCode::config_error, "cell lists no estimators");
  std::vector<EstimatorKind> kinds;
  for (const auto& n : names) kinds.push_back(parse_estimator(n));
  return kinds;
}

void check_R(int R) {
  if (R < 2) throw Error(ErrorCode::config_error, "a cell needs R >= 2 replications");
}

}  // namespace

int default_replications(Scale scale) { return scale == Scale::paper ? 1000 : 500; }

Scale parse_scale(std::string_view text) {
  if (text == "desk") return Scale::desk;
  if (text == "paper") return Scale::paper;
  throw Error(ErrorCode::invalid_argument, "scale must be desk or paper");
}

std::string_view name(Scale scale) { return scale == Scale::paper ? "paper" : "desk"; }

EstimatorStats summarize_estimates(const std::string& estimator,
                                   const std::vector<std::optional<double>>& estimates,
                                   const std::vector<std::optional<double>>& boot_se,
                                   double theta0) {
  EstimatorStats s;
  s.estimator = estimator;
  const bool boot = !boot_se.empty();
  double sum = 0.0;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const bool failed = !estimates[i] || (boot && !boot_se[i]);
    if (failed) ++s.failures;
    if (estimates[i]) {
      ++s.R_effective;
      sum += *estimates[i];
    }
  }
  if (s.R_effective == 0) return s;
  s.mean = sum / s.R_effective;
  double sq_bias = 0.0, sq_dev = 0.0, ae = 0.0;
  int n_boot = 0, covered = 0;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    if (!estimates[i]) continue;
    const double x = *estimates[i];
    sq_bias += (x - theta0) * (x - theta0);
    sq_dev += (x - s.mean) * (x - s.mean);
    if (boot && boot_se[i]) {
      ++n_boot;
      ae += *boot_se[i];
      if (std::abs(x - theta0) <= 1.96 * *boot_se[i]) ++covered;
    }
  }
  s.se = std::sqrt(sq_bias / s.R_effective);
  s.sd = std::sqrt(sq_dev / s.R_effective);
  if (n_boot > 0) {
    s.ae = ae / n_boot;
    s.coverage = static_cast<double>(covered) / n_boot;
  }
  return s;
}

std::map<std::string, std::optional<double>> efficiency_ratios(
    const std::map<std::string, double>& sd) {
  auto ratio = [&](const char* num, const char* den) -> std::optional<double> {
    const auto a = sd.find(num);
    const auto b = sd.find(den);
    if (a == sd.end() || b == sd.end() || !(b->second > 0.0)) return std::nullopt;
    return a->second / b->second;
  };
  return {
      {"R1", ratio("alade_feasible", "alade_infeasible")},
      {"R2", ratio("lade", "alse_infeasible")},
      {"R3", ratio("alade_feasible", "alse_infeasible")},
      {"R4", ratio("lse", "alse_infeasible")},
  };
}

EstimationResult run_estimation_cell(const EstimationCell& cell, int R, std::uint64_t seed,
                                     unsigned threads) {
  check_R(R);
  if (cell.J == 1 || cell.J < 0) throw Error(ErrorCode::config_error, "J must be 0 or >= 2");
  const std::vector<EstimatorKind> kinds = parse_all(cell.estimators);
  const DGPSpec spec = make_spec(cell.errors, cell.n, Eigen::VectorXd::Constant(1, cell.theta0));
  const Eigen::Index slope = cell.intercept ? 1 : 0;
  FitOptions fo;
  fo.intercept = cell.intercept;

  const std::size_t E = kinds.size();
  std::vector<std::vector<std::optional<double>>> est(E, std::vector<std::optional<double>>(R));
  std::vector<std::vector<std::optional<double>>> se(E);
  if (cell.J > 0) se.assign(E, std::vector<std::optional<double>>(R));
  std::vector<std::vector<char>> warned(E, std::vector<char>(R, 0));

  parallel_for(static_cast<std::size_t>(R), threads, [&](std::size_t r) {
    Stream data(seed, r, Purpose::innovation);
    const SeriesSample sample = gen_sample(spec, data);
    for (std::size_t e = 0; e < E; ++e) {
      FitResult f;
      try {
        f = fit(sample, 1, kinds[e], fo);
      } catch (const Error&) {
        continue;
      }
      est[e][r] = f.theta(slope);
      if (cell.J == 0) continue;
      RWConfig rw;
      rw.J = cell.J;
      rw.seed = bootstrap_seed(seed, static_cast<int>(r), e, 0);
      try {
        const BootstrapCov V = rw_covariance_theta(sample, f, rw, fo);
        se[e][r] = std::sqrt(V.matrix(slope, slope));
        warned[e][r] = V.warning;
      } catch (const Error&) {
      }
    }
  });

  EstimationResult out;
  out.cell = cell;
  out.R = R;
  std::map<std::string, double> sd;
  for (std::size_t e = 0; e < E; ++e) {
    EstimatorStats s = summarize_estimates(cell.estimators[e], est[e], se[e], cell.theta0);
    for (char w : warned[e]) s.bootstrap_warnings += w;
    if (s.failures > kMaxFailureShare * R) out.valid = false;
    if (s.R_effective > 1) sd[s.estimator] = s.sd;
    out.stats.push_back(std::move(s));
  }
  out.ratios = efficiency_ratios(sd);
  return out;
}

TestResult run_test_cell(const TestCell& cell, int R, std::uint64_t seed, unsigned threads) {
  check_R(R);
  if (cell.J < 2) throw Error(ErrorCode::config_error, "test cells need J >= 2");
  if (cell.M < 1) throw Error(ErrorCode::config_error, "test cells need M >= 1");
  if (!(cell.level > 0.0 && cell.level <= 1.0)) {
    throw Error(ErrorCode::config_error, "level must lie in (0, 1]");
  }
  const std::vector<EstimatorKind> kinds = parse_all(cell.estimators);
  Eigen::VectorXd phi(2);
  phi << 0.5, cell.kappa;
  const DGPSpec spec = make_spec(cell.errors, cell.n, phi);
  FitOptions fo;
  fo.intercept = cell.intercept;
  const int k = cell.intercept ? 3 : 2;
  Eigen::MatrixXd Gamma = Eigen::MatrixXd::Zero(1, k);
  Gamma(0, k - 1) = 1.0;
  const Eigen::VectorXd r0 = Eigen::VectorXd::Zero(1);

  // 0 = failed, 1 = accepted, 2 = rejected.
  const std::size_t E = kinds.size();
  std::vector<std::vector<char>> wald(E, std::vector<char>(R, 0));
  std::vector<std::vector<char>> port(E, std::vector<char>(R, 0));

  parallel_for(static_cast<std::size_t>(R), threads, [&](std::size_t r) {
    Stream data(seed, r, Purpose::innovation);
    const SeriesSample sample = gen_sample(spec, data);
    for (std::size_t e = 0; e < E; ++e) {
      RWConfig rw;
      rw.J = cell.J;
      try {
        const FitResult f2 = fit(sample, 2, kinds[e], fo);
        rw.seed = bootstrap_seed(seed, static_cast<int>(r), e, 0);
        const BootstrapCov V = rw_covariance_theta(sample, f2, rw, fo);
        wald[e][r] = wald_test(f2.theta, V.matrix, Gamma, r0).rejects(cell.level) ? 2 : 1;
      } catch (const Error&) {
      }
      try {
        const FitResult f1 = fit(sample, 1, kinds[e], fo);
        rw.seed = bootstrap_seed(seed, static_cast<int>(r), e, 1);
        const RWBootstrap b = rw_bootstrap(sample, f1, cell.M, rw, fo);
        port[e][r] = portmanteau_test(b.r_hat, b.racf.matrix).rejects(cell.level) ? 2 : 1;
      } catch (const Error&) {
      }
    }
  });

  auto tally = [&](const std::vector<char>& v) {
    RejectionRate rate;
    for (char c : v) {
      if (c == 0) ++rate.failures;
      else ++rate.effective;
      if (c == 2) ++rate.rejections;
    }
    return rate;
  };
  TestResult out;
  out.cell = cell;
  out.R = R;
  for (std::size_t e = 0; e < E; ++e) {
    TestStats s{cell.estimators[e], tally(wald[e]), tally(port[e])};
    if (s.wald.failures > kMaxFailureShare * R || s.portmanteau.failures > kMaxFailureShare * R) {
      out.valid = false;
    }
    out.stats.push_back(std::move(s));
  }
  return out;
}

SimReport run_experiment(const ExperimentConfig& config, Scale scale) {
  SimReport report;
  report.name = config.name;
  report.master_seed = config.master_seed;
  report.scale = scale;
  const int R_default = default_replications(scale);
  for (std::size_t i = 0; i < config.estimation.size(); ++i) {
    const EstimationCell& c = config.estimation[i];
    report.estimation.push_back(run_estimation_cell(
        c, c.R.value_or(R_default), derive_seed(config.master_seed, i, kEstimationDomain),
        config.threads));
  }
  for (std::size_t i = 0; i < config.tests.size(); ++i) {
    const TestCell& c = config.tests[i];
    report.tests.push_back(run_test_cell(c, c.R.value_or(R_default),
                                         derive_seed(config.master_seed, i, kTestDomain),
                                         config.threads));
  }
  return report;
}

std::vector<EfficiencyRow> run_efficiency_curves(ErrorDist dist, std::string_view family,
                                                 const std::vector<double>& deltas,
                                                 const std::vector<double>& taus) {
  if (deltas.empty()) throw Error(ErrorCode::invalid_argument, "empty delta grid");
  std::vector<EfficiencyRow> rows;
  if (family == "abrupt" || family == "step") {
    if (taus.empty()) throw Error(ErrorCode::invalid_argument, "empty tau grid");
    for (double tau : taus) {
      for (double d : deltas) {
        rows.push_back({tau, d, efficiency_constants(GProfile::step(1.0, d, tau), dist)});
      }
    }
    return rows;
  }
  for (double d : deltas) {
    rows.push_back({std::nullopt, d, efficiency_constants(GProfile::from_name(family, d), dist)});
  }
  return rows;
}

ExperimentConfig preset_config(std::string_view name) {
  const bool garch = name.ends_with("_garch");
  GarchParams g;
  if (garch) g = {0.1, 0.8, 0.1};
  const std::string tag = garch ? "garch" : "iid";
  ExperimentConfig cfg;
  cfg.name = std::string(name);

  auto errors = [&](double delta) {
    ErrorModel e;
    e.delta = delta;
    e.garch = g;
    return e;
  };
  auto label = [&](double delta, Eigen::Index n) {
    return tag + " delta=" + std::to_string(delta).substr(0, 3) + " n=" + std::to_string(n);
  };

  if (name == "table1_sl_iid" || name == "table1_sl_garch") {
    for (double delta : {0.2, 5.0}) {
      for (Eigen::Index n : {100, 200}) {
        EstimationCell c;
        c.label = label(delta, n);
        c.errors = errors(delta);
        c.n = n;
        cfg.estimation.push_back(c);
      }
    }
    return cfg;
  }
  if (name == "table2_sl_iid" || name == "table2_sl_garch") {
    for (double delta : {0.2, 5.0}) {
      for (Eigen::Index n : {100, 200}) {
        EstimationCell c;
        c.label = label(delta, n);
        c.errors = errors(delta);
        c.n = n;
        c.estimators = {"lade", "alade_infeasible", "alade_feasible", "lse", "alse_infeasible"};
        c.J = 0;
        cfg.estimation.push_back(c);
      }
    }
    return cfg;
  }
  if (name == "table3_sl_iid" || name == "table3_sl_garch") {
    for (double delta : {0.2, 5.0}) {
      for (Eigen::Index n : {100, 200}) {
        for (double kappa : {0.0, 0.2, 0.4}) {
          TestCell c;
          c.label = label(delta, n) + " kappa=" + std::to_string(kappa).substr(0, 3);
          c.errors = errors(delta);
          c.n = n;
          c.kappa = kappa;
          cfg.tests.push_back(c);
        }
      }
    }
    return cfg;
  }
  throw Error(ErrorCode::config_error, "unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() {
  return {"table1_sl_iid", "table1_sl_garch", "table2_sl_iid",
          "table2_sl_garch", "table3_sl_iid", "table3_sl_garch"};
}

}  // namespace arlad
