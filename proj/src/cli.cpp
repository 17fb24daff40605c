#include "arlad/cli.hpp"

#include "arlad/bootstrap.hpp"
#include "arlad/chi2.hpp"
#include "arlad/diagnostics.hpp"
#include "arlad/error.hpp"
#include "arlad/estimators.hpp"
#include "arlad/report.hpp"
#include "arlad/simharness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace arlad {
namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

std::vector<double> parse_grid(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = parse_number(trim(item));
    if (!v || !std::isfinite(*v)) {
      throw Error(ErrorCode::parse_error,
                  std::string("bad value '") + trim(item) + "' in " + what);
    }
    out.push_back(*v);
  }
  if (out.empty()) throw Error(ErrorCode::parse_error, std::string(what) + " is empty");
  return out;
}

std::vector<std::string> coefficient_names(int p, bool intercept) {
  std::vector<std::string> names;
  if (intercept) names.push_back("mu");
  for (int i = 1; i <= p; ++i) names.push_back("phi" + std::to_string(i));
  return names;
}

json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json mat_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec_json(m.row(i).transpose()));
  return rows;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::io_error, "cannot write '" + path + "'");
  f << text;
  if (!f) throw Error(ErrorCode::io_error, "write to '" + path + "' failed");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string fmt(double v, int width, int prec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%*.*f", width, prec, v);
  return buf;
}

struct Common {
  std::string input;
  std::string out;
  std::string estimator = "lade";
  int p = 1;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  bool pretty = false;
  bool no_intercept = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("input", c.input, "CSV file with one numeric column")->required();
  cmd->add_option("--p", c.p, "AR order")->check(CLI::NonNegativeNumber);
  cmd->add_option("--estimator", c.estimator,
                  "lade | alade | alade_infeasible | lse | alse_infeasible");
  cmd->add_option("--seed", c.seed, "bootstrap seed");
  cmd->add_option("--threads", c.threads, "worker threads (0 = ARLAD_THREADS or all cores)");
  cmd->add_option("--out", c.out, "output file (default stdout)");
  cmd->add_flag("--pretty", c.pretty, "aligned text instead of JSON");
  cmd->add_flag("--no-intercept", c.no_intercept, "fix mu at zero");
}

FitResult fit_from(const SeriesSample& sample, const Common& c) {
  FitOptions fo;
  fo.intercept = !c.no_intercept;
  return fit(sample, c.p, parse_estimator(c.estimator), fo);
}

void cmd_fit(const Common& c, int J, std::ostream& out) {
  const SeriesSample sample = read_series_csv_file(c.input);
  const FitResult f = fit_from(sample, c);
  const auto names = coefficient_names(c.p, f.intercept);

  json j = {{"schema_version", kSchemaVersion},
            {"command", "fit"},
            {"n", sample.size()},
            {"p", c.p},
            {"intercept", f.intercept},
            {"estimator", std::string(name(f.kind))},
            {"coefficients", names},
            {"theta", vec_json(f.theta)},
            {"solver_status", std::string(to_string(f.solver_status))}};
  if (f.bandwidth) {
    j["bandwidth"] = *f.bandwidth;
    j["bandwidth_c"] = *f.bandwidth_c;
    j["g_hat"] = vec_json(f.weights_used);
  }

  std::optional<BootstrapCov> V;
  if (J > 0) {
    RWConfig rw;
    rw.J = J;
    rw.seed = c.seed;
    rw.threads = c.threads;
    FitOptions fo;
    fo.intercept = f.intercept;
    V = rw_covariance_theta(sample, f, rw, fo);
    json wald = json::array();
    Eigen::VectorXd sd = V->matrix.diagonal().cwiseSqrt();
    for (Eigen::Index i = 0; i < f.theta.size(); ++i) {
      const double vii = V->matrix(i, i);
      json w = {{"coefficient", names[i]}};
      if (vii > 0.0) {
        const double stat = f.theta(i) * f.theta(i) / vii;
        w["statistic"] = stat;
        w["p_value"] = chi2_sf(stat, 1.0);
      } else {
        w["statistic"] = nullptr;
        w["p_value"] = nullptr;
      }
      wald.push_back(w);
    }
    j["bootstrap"] = {{"J", J},
                      {"J_effective", V->J_effective},
                      {"J_dropped", V->J_dropped},
                      {"warning", V->warning},
                      {"seed", c.seed},
                      {"covariance", mat_json(V->matrix)},
                      {"sd", vec_json(sd)},
                      {"wald", wald}};
  }

  if (!c.pretty) {
    emit(dump(j), c.out, out);
    return;
  }
  std::ostringstream os;
  os << "AR(" << c.p << ") " << name(f.kind) << "  n=" << sample.size()
     << "  status=" << to_string(f.solver_status) << "\n";
  if (f.bandwidth) os << "bandwidth " << *f.bandwidth << " (C=" << *f.bandwidth_c << ")\n";
  os << "coef           estimate   boot.sd      Wald   p-value\n";
  for (Eigen::Index i = 0; i < f.theta.size(); ++i) {
    os << names[i] << std::string(12 - names[i].size(), ' ') << fmt(f.theta(i), 11, 5);
    if (V && V->matrix(i, i) > 0.0) {
      const double stat = f.theta(i) * f.theta(i) / V->matrix(i, i);
      os << fmt(std::sqrt(V->matrix(i, i)), 10, 5) << fmt(stat, 10, 3)
         << fmt(chi2_sf(stat, 1.0), 10, 4);
    }
    os << "\n";
  }
  if (V) os << "bootstrap J=" << J << " effective=" << V->J_effective << "\n";
  emit(os.str(), c.out, out);
}

void cmd_diagnose(const Common& c, int M, int J, std::ostream& out) {
  const SeriesSample sample = read_series_csv_file(c.input);
  const FitResult f = fit_from(sample, c);
  RWConfig rw;
  rw.J = J;
  rw.seed = c.seed;
  rw.threads = c.threads;
  FitOptions fo;
  fo.intercept = f.intercept;
  const RWBootstrap b = rw_bootstrap(sample, f, M, rw, fo);
  const TestOutcome t = portmanteau_test(b.r_hat, b.racf.matrix);
  const bool adequate = !t.rejects(0.05);

  json j = {{"schema_version", kSchemaVersion},
            {"command", "diagnose"},
            {"n", sample.size()},
            {"p", c.p},
            {"intercept", f.intercept},
            {"estimator", std::string(name(f.kind))},
            {"theta", vec_json(f.theta)},
            {"M", M},
            {"r_hat", vec_json(b.r_hat.r)},
            {"U", mat_json(b.racf.matrix)},
            {"statistic", t.statistic},
            {"df", t.df},
            {"p_value", t.p_value},
            {"adequate_at_5pct", adequate},
            {"bootstrap",
             {{"J", J},
              {"J_effective", b.racf.J_effective},
              {"J_dropped", b.racf.J_dropped},
              {"warning", b.racf.warning},
              {"seed", c.seed}}}};
  if (!c.pretty) {
    emit(dump(j), c.out, out);
    return;
  }
  std::ostringstream os;
  os << "sign portmanteau, AR(" << c.p << ") " << name(f.kind) << "  n=" << sample.size()
     << "  M=" << M << "\n";
  os << "lag      r_hat     boot.sd\n";
  for (int k = 0; k < M; ++k) {
    os << fmt(k + 1, 3, 0) << fmt(b.r_hat.r(k), 11, 5)
       << fmt(std::sqrt(std::max(b.racf.matrix(k, k), 0.0)), 12, 5) << "\n";
  }
  os << "S(" << M << ") = " << fmt(t.statistic, 0, 4) << "  p = " << fmt(t.p_value, 0, 4)
     << "  -> " << (adequate ? "adequate" : "inadequate") << " at 5%\n";
  emit(os.str(), c.out, out);
}

ExperimentConfig load_config(const std::string& ref) {
  for (const auto& n : preset_names()) {
    if (n == ref) return preset_config(ref);
  }
  std::ifstream f(ref);
  if (!f) {
    throw Error(ErrorCode::config_error,
                "'" + ref + "' is neither a preset nor a readable config file");
  }
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse_error, "config '" + ref + "': " + e.what());
  }
  return config_from_json(j);
}

json error_json(std::string_view code, const std::string& message) {
  return {{"schema_version", kSchemaVersion},
          {"error", {{"code", std::string(code)}, {"message", message}}}};
}

}  // namespace

SeriesSample read_series_csv(std::istream& in) {
  std::vector<double> values;
  std::string line;
  int line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string cell = trim(line);
    if (cell.empty()) continue;
    const bool first = !seen_content;
    seen_content = true;
    if (cell.find_first_of(",;\t") != std::string::npos) {
      throw Error(ErrorCode::parse_error,
                  "line " + std::to_string(line_no) + ": expected a single column");
    }
    const auto v = parse_number(cell);
    if (!v) {
      if (first) continue;  // header
      throw Error(ErrorCode::parse_error,
                  "line " + std::to_string(line_no) + ": '" + cell + "' is not a number");
    }
    if (!std::isfinite(*v)) {
      throw Error(ErrorCode::parse_error,
                  "line " + std::to_string(line_no) + ": non-finite value '" + cell + "'");
    }
    values.push_back(*v);
  }
  if (values.empty()) throw Error(ErrorCode::parse_error, "no numeric rows");
  SeriesSample s;
  s.y = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  return s;
}

SeriesSample read_series_csv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::io_error, "cannot read '" + path + "'");
  try {
    return read_series_csv(f);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust AR(p) estimation with heteroscedastic errors"};
  app.name("arlad");
  app.require_subcommand(1);

  Common fit_args;
  int fit_J = 500;
  auto* fit_cmd = app.add_subcommand("fit", "fit an AR(p) model, optionally with bootstrap SEs");
  add_common(fit_cmd, fit_args);
  fit_cmd->add_option("--bootstrap", fit_J, "bootstrap replications (0 = none)")
      ->check(CLI::NonNegativeNumber);

  Common diag_args;
  int diag_M = kDefaultMaxLag;
  int diag_J = 500;
  auto* diag_cmd = app.add_subcommand("diagnose", "sign-based portmanteau adequacy test");
  add_common(diag_cmd, diag_args);
  diag_cmd->add_option("--M", diag_M, "largest lag")->check(CLI::PositiveNumber);
  diag_cmd->add_option("--J", diag_J, "bootstrap replications")->check(CLI::Range(2, 1 << 30));

  std::string sim_config, sim_scale = "desk", sim_out;
  std::optional<std::uint64_t> sim_seed;
  std::optional<unsigned> sim_threads;
  bool sim_pretty = false;
  auto* sim_cmd = app.add_subcommand("simulate", "run a Monte-Carlo experiment");
  sim_cmd->add_option("config", sim_config, "preset name or JSON config file")->required();
  sim_cmd->add_option("--scale", sim_scale, "desk (R=500) or paper (R=1000)")
      ->check(CLI::IsMember({"desk", "paper"}));
  sim_cmd->add_option("--seed", sim_seed, "override the master seed");
  sim_cmd->add_option("--threads", sim_threads, "worker threads");
  sim_cmd->add_option("--out", sim_out, "output file (default stdout)");
  sim_cmd->add_flag("--pretty", sim_pretty, "aligned text instead of JSON");

  std::string eff_dist = "SL", eff_profile = "abrupt", eff_tau = "0.5",
              eff_delta = "0.2,0.5,1,2,3,4,5", eff_out;
  bool eff_pretty = false;
  auto* eff_cmd = app.add_subcommand("efficiency", "asymptotic efficiency constants b1..b4");
  eff_cmd->add_option("--dist", eff_dist, "SL | ST3 | N");
  eff_cmd->add_option("--profile", eff_profile, "abrupt | gradual | periodic");
  eff_cmd->add_option("--tau-grid", eff_tau, "comma-separated change points (abrupt only)");
  eff_cmd->add_option("--delta-grid", eff_delta, "comma-separated delta values");
  eff_cmd->add_option("--out", eff_out, "output file (default stdout)");
  eff_cmd->add_flag("--pretty", eff_pretty, "aligned text instead of JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << error_json("usage_error", e.what()).dump() << "\n";
    return 2;
  }

  try {
    if (*fit_cmd) {
      cmd_fit(fit_args, fit_J, out);
    } else if (*diag_cmd) {
      cmd_diagnose(diag_args, diag_M, diag_J, out);
    } else if (*sim_cmd) {
      ExperimentConfig cfg = load_config(sim_config);
      if (sim_seed) cfg.master_seed = *sim_seed;
      if (sim_threads) cfg.threads = *sim_threads;
      const SimReport report = run_experiment(cfg, parse_scale(sim_scale));
      emit(sim_pretty ? render_text(report) : dump(to_json(report)), sim_out, out);
    } else if (*eff_cmd) {
      const ErrorDist dist = parse_error_dist(eff_dist);
      const auto rows = run_efficiency_curves(dist, eff_profile, parse_grid(eff_delta, "--delta-grid"),
                                              parse_grid(eff_tau, "--tau-grid"));
      emit(eff_pretty ? render_text(rows) : dump(to_json(rows, dist, eff_profile)), eff_out, out);
    }
  } catch (const Error& e) {
    err << error_json(to_string(e.code()), e.what()).dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << error_json("internal_error", e.what()).dump() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace arlad
