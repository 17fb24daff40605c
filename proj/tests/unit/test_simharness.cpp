#include "arlad/simharness.hpp"

#include "support/test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace arlad;

namespace {

EstimationCell small_cell() {
  EstimationCell c;
  c.label = "small";
  c.n = 100;
  c.J = 50;
  return c;
}

}  // namespace

TEST_SUITE("simharness") {
  TEST_CASE("summaries of a degenerate estimator") {
    const std::vector<std::optional<double>> x(20, 0.5);
    const EstimatorStats s = summarize_estimates("stub", x, {}, 0.5);
    CHECK(s.R_effective == 20);
    CHECK(s.failures == 0);
    CHECK(s.se == 0.0);
    CHECK(s.sd == 0.0);
    CHECK_FALSE(s.ae.has_value());
    const auto ratios = efficiency_ratios({{"alade_feasible", 0.0}, {"alade_infeasible", 0.0}});
    for (const auto& [k, v] : ratios) {
      CAPTURE(k);
      CHECK_FALSE(v.has_value());
    }
  }

  TEST_CASE("SE decomposes into SD and bias") {
    std::vector<std::optional<double>> x{0.1, 0.7, std::nullopt, 0.55, 0.43, 0.61};
    const std::vector<std::optional<double>> b{0.1, 0.1, 0.1, std::nullopt, 0.2, 0.01};
    const EstimatorStats s = summarize_estimates("e", x, b, 0.5);
    CHECK(s.R_effective == 5);
    CHECK(s.failures == 2);
    const double mean = (0.1 + 0.7 + 0.55 + 0.43 + 0.61) / 5;
    CHECK(s.mean == doctest::Approx(mean).epsilon(1e-15));
    CHECK(s.se * s.se == doctest::Approx(s.sd * s.sd + (mean - 0.5) * (mean - 0.5)).epsilon(1e-12));
    CHECK(*s.ae == doctest::Approx(0.41 / 4).epsilon(1e-15));
    // Only 0.43 lies within 1.96 bootstrap SEs of 0.5.
    CHECK(*s.coverage == doctest::Approx(0.25));
  }

  TEST_CASE("ratios") {
    const auto r = efficiency_ratios({{"lade", 2.0},
                                      {"alade_infeasible", 1.0},
                                      {"alade_feasible", 1.1},
                                      {"lse", 3.0},
                                      {"alse_infeasible", 1.5}});
    CHECK(*r.at("R1") == doctest::Approx(1.1));
    CHECK(*r.at("R2") == doctest::Approx(2.0 / 1.5));
    CHECK(*r.at("R3") == doctest::Approx(1.1 / 1.5));
    CHECK(*r.at("R4") == doctest::Approx(2.0));
    CHECK_FALSE(efficiency_ratios({{"lade", 2.0}}).at("R2").has_value());
  }

  TEST_CASE("estimation cells are thread-count invariant") {
    const EstimationCell c = small_cell();
    const EstimationResult a = run_estimation_cell(c, 24, 42, 1);
    const EstimationResult b = run_estimation_cell(c, 24, 42, 4);
    REQUIRE(a.stats.size() == 2);
    for (std::size_t e = 0; e < 2; ++e) {
      CHECK(a.stats[e].se == b.stats[e].se);
      CHECK(a.stats[e].sd == b.stats[e].sd);
      CHECK(*a.stats[e].ae == *b.stats[e].ae);
      CHECK(a.stats[e].R_effective == 24);
    }
    CHECK(a.valid);
    const EstimationResult other = run_estimation_cell(c, 24, 43, 1);
    CHECK(other.stats[0].se != a.stats[0].se);
  }

  TEST_CASE("bootstrap SE tracks the Monte-Carlo spread") {
    EstimationCell c = small_cell();
    c.n = 200;
    c.J = 200;
    const EstimationResult res = run_estimation_cell(c, 200, 7, 0);
    for (const auto& s : res.stats) {
      CAPTURE(s.estimator);
      CHECK(*s.ae == doctest::Approx(s.sd).epsilon(0.3));
      CHECK(*s.coverage > 0.85);
      CHECK(std::abs(s.mean - 0.5) < 0.05);
    }
  }

  TEST_CASE("a level of one rejects every replication") {
    TestCell c;
    c.n = 100;
    c.J = 20;
    c.level = 1.0;
    c.estimators = {"lade"};
    const TestResult t = run_test_cell(c, 10, 3, 0);
    CHECK(t.stats[0].wald.rate() == 1.0);
    CHECK(t.stats[0].portmanteau.rate() == 1.0);
    CHECK(t.stats[0].wald.effective == 10);
  }

  TEST_CASE("invalid cells") {
    EstimationCell c = small_cell();
    CHECK_ERROR_CODE(run_estimation_cell(c, 1, 1), ErrorCode::config_error);
    c.J = 1;
    CHECK_ERROR_CODE(run_estimation_cell(c, 5, 1), ErrorCode::config_error);
    c.J = 0;
    c.estimators = {};
    CHECK_ERROR_CODE(run_estimation_cell(c, 5, 1), ErrorCode::config_error);
    c.estimators = {"median"};
    CHECK_ERROR_CODE(run_estimation_cell(c, 5, 1), ErrorCode::invalid_argument);
    c.estimators = {"lade"};
    c.errors.garch = {0.5, 0.6, 0.1};
    CHECK_ERROR_CODE(run_estimation_cell(c, 5, 1), ErrorCode::nonstationary_garch);

    TestCell t;
    t.M = 0;
    CHECK_ERROR_CODE(run_test_cell(t, 5, 1), ErrorCode::config_error);
    t.M = 6;
    t.level = 0.0;
    CHECK_ERROR_CODE(run_test_cell(t, 5, 1), ErrorCode::config_error);
    CHECK_ERROR_CODE(parse_scale("huge"), ErrorCode::invalid_argument);
  }

  TEST_CASE("presets") {
    CHECK(default_replications(Scale::desk) == 500);
    CHECK(default_replications(Scale::paper) == 1000);
    for (const auto& n : preset_names()) {
      CAPTURE(n);
      const ExperimentConfig cfg = preset_config(n);
      CHECK(cfg.estimation.size() + cfg.tests.size() > 0);
      const bool garch = n.ends_with("garch");
      for (const auto& c : cfg.estimation) CHECK((c.errors.garch.alpha > 0.0) == garch);
      for (const auto& c : cfg.tests) CHECK((c.errors.garch.alpha > 0.0) == garch);
    }
    CHECK(preset_config("table3_sl_iid").tests.size() == 12);
    CHECK(preset_config("table2_sl_garch").estimation[0].estimators.size() == 5);
    CHECK_ERROR_CODE(preset_config("table9"), ErrorCode::config_error);
  }

  TEST_CASE("experiments are reproducible") {
    ExperimentConfig cfg;
    cfg.master_seed = 99;
    cfg.estimation = {small_cell(), small_cell()};
    cfg.estimation[0].R = 6;
    cfg.estimation[1].R = 6;
    const SimReport a = run_experiment(cfg, Scale::desk);
    cfg.estimation.pop_back();
    const SimReport b = run_experiment(cfg, Scale::desk);
    CHECK(a.estimation[0].stats[0].se == b.estimation[0].stats[0].se);
    CHECK(a.estimation[0].stats[0].se != a.estimation[1].stats[0].se);
  }

  TEST_CASE("efficiency curves") {
    const auto rows = run_efficiency_curves(ErrorDist::std_laplace, "abrupt", {1.0, 5.0}, {0.25, 0.5});
    REQUIRE(rows.size() == 4);
    CHECK(*rows[0].tau == 0.25);
    CHECK(rows[0].b.b1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rows[3].b.b1 == doctest::Approx(13.0 / 18.0).epsilon(1e-9));
    CHECK(rows[3].b.b3 == doctest::Approx(313.0 / 169.0).epsilon(1e-9));
    const auto g = run_efficiency_curves(ErrorDist::std_normal, "gradual", {1.0, 3.0});
    CHECK_FALSE(g[0].tau.has_value());
    CHECK(g[1].b.b2 == doctest::Approx(std::acos(-1.0) / 2.0).epsilon(1e-12));
    CHECK_ERROR_CODE(run_efficiency_curves(ErrorDist::std_normal, "abrupt", {}), ErrorCode::invalid_argument);
  }
}
