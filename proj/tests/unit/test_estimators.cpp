#include "arlad/bootstrap.hpp"
#include "arlad/dgp.hpp"
#include "arlad/estimators.hpp"

#include "support/test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace arlad;

namespace {

// y_t = 1 + 0.5 y_{t-1} exactly, starting from y_0 = 0.
SeriesSample noise_free(Eigen::Index n) {
  SeriesSample s;
  s.y = ar_filter(Eigen::VectorXd::Constant(1, 0.5), Eigen::VectorXd::Zero(n), 1.0);
  s.true_g = GProfile::abrupt(3.0).sample(n);
  return s;
}

SeriesSample simulated(Eigen::Index n, std::uint64_t seed, double delta = 0.2) {
  DGPSpec spec;
  spec.g = GProfile::abrupt(delta);
  spec.n = n;
  Stream s(seed, 0, Purpose::innovation);
  return gen_sample(spec, s);
}

FitOptions no_intercept() {
  FitOptions fo;
  fo.intercept = false;
  return fo;
}

}  // namespace

TEST_SUITE("estimators") {
  TEST_CASE("noise-free data recover the coefficients for every kind") {
    const SeriesSample s = noise_free(30);
    const Eigen::Vector2d theta0(1.0, 0.5);
    for (const char* k : {"lade", "alade", "alade_infeasible", "lse", "alse_infeasible"}) {
      CAPTURE(k);
      const FitResult f = fit(s, 1, parse_estimator(k));
      CHECK((f.theta - theta0).norm() < 1e-9);
    }
    const FitResult w = fit(s, 1, WeightedLade{Eigen::VectorXd::LinSpaced(30, 1.0, 2.0)});
    CHECK((w.theta - theta0).norm() < 1e-9);
  }

  TEST_CASE("constant weights reproduce the LADE exactly") {
    const SeriesSample s = simulated(150, 1);
    const FitResult a = fit(s, 2, Lade{});
    const FitResult b = fit(s, 2, WeightedLade{Eigen::VectorXd::Constant(150, 3.7)});
    CHECK(a.theta == b.theta);
  }

  TEST_CASE("weight scaling leaves every fit unchanged") {
    const SeriesSample s = simulated(200, 2, 5.0);
    const Eigen::VectorXd w = s.true_g->cwiseSqrt();
    const FitResult a = fit(s, 1, WeightedLade{w});
    const FitResult b = fit(s, 1, WeightedLade{w * 0.125});
    CHECK(a.theta == b.theta);

    SeriesSample scaled = s;
    scaled.true_g = *s.true_g * 4.0;
    CHECK(fit(s, 1, AladeInfeasible{}).theta == fit(scaled, 1, AladeInfeasible{}).theta);
  }

  TEST_CASE("residuals and weights are reported") {
    const SeriesSample s = simulated(120, 3);
    const FitResult f = fit(s, 1, AladeFeasible{}, no_intercept());
    REQUIRE(f.bandwidth.has_value());
    REQUIRE(f.bandwidth_c.has_value());
    CHECK(*f.bandwidth == doctest::Approx(*f.bandwidth_c * std::pow(120.0, -1.0 / 5.5)));
    CHECK((f.weights_used.array() > 0.0).all());
    const ARSpec spec{1, f.theta, false};
    Eigen::VectorXd r = residuals(s, spec);
    for (int i : f.basis) {
      CHECK(std::abs(r(i)) < 1e-10);
      CHECK(f.residuals(i) == 0.0);
      r(i) = 0.0;
    }
    CHECK((r - f.residuals).norm() < 1e-12);
  }

  TEST_CASE("least squares solves the weighted normal equations") {
    const SeriesSample s = simulated(100, 4, 5.0);
    const Design d = build_design(s, 2);
    const Eigen::VectorXd rw = s.true_g->array().square().inverse();
    const Eigen::MatrixXd XtW = d.X.transpose() * rw.asDiagonal();
    const Eigen::VectorXd ref = (XtW * d.X).ldlt().solve(XtW * d.y);
    CHECK((fit(s, 2, AlseInfeasible{}).theta - ref).norm() < 1e-10);
    const Eigen::VectorXd ols = (d.X.transpose() * d.X).ldlt().solve(d.X.transpose() * d.y);
    CHECK((fit(s, 2, Lse{}).theta - ols).norm() < 1e-10);
  }

  TEST_CASE("errors") {
    SeriesSample tiny;
    tiny.y = Eigen::Vector3d(1, 2, 3);
    CHECK_ERROR_CODE(fit(tiny, 2, Lade{}), ErrorCode::invalid_argument);
    SeriesSample s = simulated(50, 5);
    s.true_g.reset();
    CHECK_ERROR_CODE(fit(s, 1, AladeInfeasible{}), ErrorCode::missing_true_g);
    CHECK_ERROR_CODE(fit(s, 1, AlseInfeasible{}), ErrorCode::missing_true_g);
    CHECK_ERROR_CODE(fit(s, 1, WeightedLade{Eigen::VectorXd::Zero(50)}),
                     ErrorCode::invalid_argument);
    CHECK_ERROR_CODE(parse_estimator("median"), ErrorCode::invalid_argument);
    SeriesSample flat;
    flat.y = Eigen::VectorXd::Zero(20);
    CHECK_ERROR_CODE(fit(flat, 1, Lade{}), ErrorCode::rank_deficient);
  }

  TEST_CASE("names round-trip") {
    for (const char* k : {"lade", "alade_feasible", "alade_infeasible", "lse", "alse_infeasible"}) {
      CHECK(name(parse_estimator(k)) == k);
    }
    CHECK(name(parse_estimator("alade")) == "alade_feasible");
    CHECK(is_lad(Lade{}));
    CHECK_FALSE(is_lad(Lse{}));
  }

  TEST_CASE("unit multipliers reproduce the base fit") {
    const SeriesSample s = simulated(200, 6);
    for (const char* k : {"lade", "alade", "lse"}) {
      const FitResult base = fit(s, 1, parse_estimator(k));
      const FitResult boot = fit_bootstrap(s, base, Eigen::VectorXd::Ones(200));
      CHECK((boot.theta - base.theta).norm() < 1e-12);
    }
  }

  TEST_CASE("a single active multiplier is degenerate") {
    const SeriesSample s = simulated(60, 7);
    const FitResult base = fit(s, 1, Lade{});
    Eigen::VectorXd w = Eigen::VectorXd::Zero(60);
    w(10) = 1.0;
    bool degenerate = false;
    try {
      degenerate = fit_bootstrap(s, base, w).solver_status != SolverStatus::optimal;
    } catch (const Error& e) {
      degenerate = e.code() == ErrorCode::rank_deficient;
    }
    CHECK(degenerate);
  }

  TEST_CASE("bootstrap replicates are centred on the estimate") {
    // Within one sample the bootstrap mean of a vertex estimator sits
    // O(n^-3/4) away from it, so the check averages over samples.
    for (const char* k : {"lade", "alade"}) {
      const int samples = 100;
      std::vector<double> m(samples);
      for (int i = 0; i < samples; ++i) {
        const SeriesSample s = simulated(200, 100 + i);
        const FitResult base = fit(s, 1, parse_estimator(k), no_intercept());
        RWConfig cfg;
        cfg.J = 500;
        cfg.seed = 99 + i;
        cfg.keep_draws = true;
        const BootstrapCov V = rw_covariance_theta(s, base, cfg, no_intercept());
        m[i] = (V.draws->col(0).array() - base.theta(0)).mean();
      }
      const Eigen::Map<Eigen::VectorXd> d(m.data(), samples);
      const double mean = d.mean();
      const double mc_se = std::sqrt((d.array() - mean).square().sum() / (samples - 1) / samples);
      CAPTURE(k);
      CAPTURE(mean);
      CHECK(std::abs(mean) < 3.0 * mc_se);
    }
  }
}
