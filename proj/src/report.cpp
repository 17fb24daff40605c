#include "arlad/report.hpp"

#include "arlad/error.hpp"

#include <cstdio>
#include <set>
#include <sstream>

namespace arlad {
namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& path) {
  if (!j.is_object()) throw Error(ErrorCode::config_error, path + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) {
      throw Error(ErrorCode::config_error,
                  "unknown config key '" + (path.empty() ? key : path + "." + key) + "'");
    }
  }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& path) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::config_error, "config key '" + path + "." + key + "' has the wrong type");
  }
}

ErrorModel errors_from_json(const json& j, const std::string& path) {
  check_keys(j, {"profile", "delta", "garch", "dist", "burn_in"}, path);
  ErrorModel e;
  read(j, "profile", e.profile, path);
  read(j, "delta", e.delta, path);
  read(j, "burn_in", e.burn_in, path);
  if (j.contains("dist")) {
    std::string d;
    read(j, "dist", d, path);
    e.dist = parse_error_dist(d);
  }
  if (j.contains("garch")) {
    const std::string gp = path + ".garch";
    check_keys(j["garch"], {"alpha", "beta", "omega"}, gp);
    read(j["garch"], "alpha", e.garch.alpha, gp);
    read(j["garch"], "beta", e.garch.beta, gp);
    read(j["garch"], "omega", e.garch.omega, gp);
  }
  GProfile::from_name(e.profile, e.delta);
  return e;
}

json errors_to_json(const ErrorModel& e) {
  return {{"profile", e.profile},
          {"delta", e.delta},
          {"dist", std::string(name(e.dist))},
          {"burn_in", e.burn_in},
          {"garch", {{"alpha", e.garch.alpha}, {"beta", e.garch.beta}, {"omega", e.garch.omega}}}};
}

template <class Cell>
void read_common(const json& j, Cell& c, const std::string& path) {
  read(j, "label", c.label, path);
  if (j.contains("errors")) c.errors = errors_from_json(j["errors"], path + ".errors");
  read(j, "n", c.n, path);
  read(j, "estimators", c.estimators, path);
  if (j.contains("R")) {
    int R = 0;
    read(j, "R", R, path);
    c.R = R;
  }
  read(j, "J", c.J, path);
  read(j, "intercept", c.intercept, path);
}

template <class Cell>
json common_to_json(const Cell& c) {
  json j = {{"label", c.label},   {"errors", errors_to_json(c.errors)},
            {"n", c.n},           {"estimators", c.estimators},
            {"J", c.J},           {"intercept", c.intercept}};
  if (c.R) j["R"] = *c.R;
  return j;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string fmt(double v, int width = 9, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%*.*f", width, prec, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  check_keys(j, {"name", "master_seed", "threads", "estimation", "tests"}, "");
  ExperimentConfig cfg;
  read(j, "name", cfg.name, "");
  read(j, "master_seed", cfg.master_seed, "");
  read(j, "threads", cfg.threads, "");
  for (const char* key : {"estimation", "tests"}) {
    if (j.contains(key) && !j[key].is_array()) {
      throw Error(ErrorCode::config_error, std::string("config key '") + key + "' must be a list");
    }
  }
  if (j.contains("estimation")) {
    for (std::size_t i = 0; i < j["estimation"].size(); ++i) {
      const std::string path = "estimation[" + std::to_string(i) + "]";
      const json& cj = j["estimation"][i];
      check_keys(cj, {"label", "errors", "n", "theta0", "estimators", "R", "J", "intercept"}, path);
      EstimationCell c;
      read_common(cj, c, path);
      read(cj, "theta0", c.theta0, path);
      cfg.estimation.push_back(std::move(c));
    }
  }
  if (j.contains("tests")) {
    for (std::size_t i = 0; i < j["tests"].size(); ++i) {
      const std::string path = "tests[" + std::to_string(i) + "]";
      const json& cj = j["tests"][i];
      check_keys(cj,
                 {"label", "errors", "n", "kappa", "estimators", "R", "J", "M", "level",
                  "intercept"},
                 path);
      TestCell c;
      read_common(cj, c, path);
      read(cj, "kappa", c.kappa, path);
      read(cj, "M", c.M, path);
      read(cj, "level", c.level, path);
      cfg.tests.push_back(std::move(c));
    }
  }
  return cfg;
}

json to_json(const ExperimentConfig& cfg) {
  json j = {{"name", cfg.name}, {"master_seed", cfg.master_seed}, {"threads", cfg.threads}};
  j["estimation"] = json::array();
  for (const auto& c : cfg.estimation) {
    json cj = common_to_json(c);
    cj["theta0"] = c.theta0;
    j["estimation"].push_back(cj);
  }
  j["tests"] = json::array();
  for (const auto& c : cfg.tests) {
    json cj = common_to_json(c);
    cj["kappa"] = c.kappa;
    cj["M"] = c.M;
    cj["level"] = c.level;
    j["tests"].push_back(cj);
  }
  return j;
}

json to_json(const SimReport& report) {
  json j = {{"schema_version", kSchemaVersion},
            {"name", report.name},
            {"master_seed", report.master_seed},
            {"scale", std::string(name(report.scale))}};
  j["estimation"] = json::array();
  for (const auto& res : report.estimation) {
    json cj = common_to_json(res.cell);
    cj["theta0"] = res.cell.theta0;
    cj["R"] = res.R;
    cj["valid"] = res.valid;
    json stats = json::array();
    for (const auto& s : res.stats) {
      stats.push_back({{"estimator", s.estimator},
                       {"R_effective", s.R_effective},
                       {"failures", s.failures},
                       {"mean", s.mean},
                       {"SE", s.se},
                       {"SD", s.sd},
                       {"AE", optional_json(s.ae)},
                       {"coverage", optional_json(s.coverage)},
                       {"bootstrap_warnings", s.bootstrap_warnings}});
    }
    cj["stats"] = stats;
    json ratios = json::object();
    for (const auto& [k, v] : res.ratios) ratios[k] = optional_json(v);
    cj["ratios"] = ratios;
    j["estimation"].push_back(cj);
  }
  j["tests"] = json::array();
  for (const auto& res : report.tests) {
    json cj = common_to_json(res.cell);
    cj["kappa"] = res.cell.kappa;
    cj["M"] = res.cell.M;
    cj["level"] = res.cell.level;
    cj["R"] = res.R;
    cj["valid"] = res.valid;
    json stats = json::array();
    auto rate = [](const RejectionRate& r) {
      return json{{"rate", r.rate()},
                  {"rejections", r.rejections},
                  {"effective", r.effective},
                  {"failures", r.failures}};
    };
    for (const auto& s : res.stats) {
      stats.push_back({{"estimator", s.estimator},
                       {"wald", rate(s.wald)},
                       {"portmanteau", rate(s.portmanteau)}});
    }
    cj["stats"] = stats;
    j["tests"].push_back(cj);
  }
  return j;
}

std::string render_text(const SimReport& report) {
  std::ostringstream os;
  os << report.name << "  (scale " << name(report.scale) << ", seed " << report.master_seed
     << ")\n";
  if (!report.estimation.empty()) {
    os << "\nEstimation\n";
    for (const auto& res : report.estimation) {
      os << "\n" << res.cell.label << "  n=" << res.cell.n << "  R=" << res.R
         << "  dist=" << name(res.cell.errors.dist) << (res.valid ? "" : "  [INVALID]") << "\n";
      os << "  " << pad("estimator", 18) << pad("      SE", 10) << pad("      AE", 10)
         << pad("      SD", 10) << "failures\n";
      for (const auto& s : res.stats) {
        os << "  " << pad(s.estimator, 18) << fmt(s.se) << " " << (s.ae ? fmt(*s.ae) : "        -")
           << " " << fmt(s.sd) << " " << s.failures << "\n";
      }
      bool any = false;
      for (const auto& [k, v] : res.ratios) any = any || v.has_value();
      if (any) {
        os << "  ratios:";
        for (const auto& [k, v] : res.ratios) {
          os << "  " << k << "=" << (v ? fmt(*v, 0, 4) : std::string("undefined"));
        }
        os << "\n";
      }
    }
  }
  if (!report.tests.empty()) {
    os << "\nTests (rejection rate x100)\n\n";
    os << "  " << pad("cell", 34) << pad("estimator", 16) << pad("  Wald", 9) << "  Portm.\n";
    for (const auto& res : report.tests) {
      for (const auto& s : res.stats) {
        os << "  " << pad(res.cell.label + (res.valid ? "" : " [INVALID]"), 34)
           << pad(s.estimator, 16) << fmt(100.0 * s.wald.rate(), 6, 1) << "   "
           << fmt(100.0 * s.portmanteau.rate(), 6, 1) << "\n";
      }
    }
  }
  return os.str();
}

json to_json(const std::vector<EfficiencyRow>& rows, ErrorDist dist, std::string_view family) {
  json j = {{"schema_version", kSchemaVersion},
            {"dist", std::string(name(dist))},
            {"profile", std::string(family)}};
  j["rows"] = json::array();
  for (const auto& r : rows) {
    j["rows"].push_back({{"tau", optional_json(r.tau)},
                         {"delta", r.delta},
                         {"b1", r.b.b1},
                         {"b2", r.b.b2},
                         {"b3", r.b.b3},
                         {"b4", r.b.b4}});
  }
  return j;
}

std::string render_text(const std::vector<EfficiencyRow>& rows) {
  std::ostringstream os;
  os << "     tau     delta        b1        b2        b3        b4\n";
  for (const auto& r : rows) {
    os << (r.tau ? fmt(*r.tau, 8, 3) : std::string("       -")) << fmt(r.delta, 10, 3)
       << fmt(r.b.b1, 10, 5) << fmt(r.b.b2, 10, 5) << fmt(r.b.b3, 10, 5) << fmt(r.b.b4, 10, 5)
       << "\n";
  }
  return os.str();
}

}  // namespace arlad
