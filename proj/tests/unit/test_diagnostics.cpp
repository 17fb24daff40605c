#include "arlad/diagnostics.hpp"
#include "arlad/rng.hpp"

#include "support/oracles.hpp"
#include "support/test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace arlad;

namespace {

Eigen::VectorXd from_signs(const std::vector<int>& s) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) v(static_cast<Eigen::Index>(i)) = 0.37 * s[i];
  return v;
}

}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("alternating signs") {
    const SignACF r = sign_acf(from_signs({1, -1, 1, -1, 1, -1, 1, -1}), 1);
    CHECK(r.r(0) == -0.875);
    CHECK(r.M == 1);
    CHECK(r.n == 8);
  }

  TEST_CASE("constant signs have no autocorrelation") {
    CHECK_ERROR_CODE(sign_acf(from_signs({1, 1}), 1), ErrorCode::zero_denominator);
    CHECK_ERROR_CODE(sign_acf(Eigen::VectorXd::Zero(5), 2), ErrorCode::zero_denominator);
    CHECK_ERROR_CODE(sign_acf(from_signs({1, -1}), 2), ErrorCode::invalid_argument);
    CHECK_ERROR_CODE(sign_acf(from_signs({1, -1, 1}), 0), ErrorCode::invalid_argument);
  }

  TEST_CASE("exhaustive small instances equal the exact ratios") {
    // Every sign pattern in {-1, 0, 1}^n for n <= 7, and random ones up to 12.
    auto check_pattern = [](const std::vector<int>& signs) {
      bool constant = true;
      for (int s : signs) constant = constant && s == signs[0];
      if (constant) return;
      const int M = static_cast<int>(signs.size()) - 1;
      const SignACF r = sign_acf(from_signs(signs), M);
      const auto exact = oracle::sign_acf_exact(signs, M);
      for (int k = 0; k < M; ++k) {
        CHECK(r.r(k) == exact[k].value());
        CHECK(std::abs(r.r(k)) <= 1.0);
      }
    };
    for (int n = 2; n <= 7; ++n) {
      int total = 1;
      for (int i = 0; i < n; ++i) total *= 3;
      for (int code = 0; code < total; ++code) {
        std::vector<int> signs(n);
        int c = code;
        for (int i = 0; i < n; ++i, c /= 3) signs[i] = c % 3 - 1;
        check_pattern(signs);
      }
    }
    Stream s(8);
    for (int rep = 0; rep < 2000; ++rep) {
      const int n = 8 + rep % 5;
      std::vector<int> signs(n);
      for (int& v : signs) v = static_cast<int>(s.uniform() * 3.0) - 1;
      check_pattern(signs);
    }
  }

  TEST_CASE("bootstrap ACF weights the numerator only") {
    Stream s(3);
    Eigen::VectorXd e(40);
    for (int t = 0; t < 40; ++t) e(t) = s.normal();
    const SignACF base = sign_acf(e, 6);
    const SignACF ones = sign_acf_bootstrap(e, Eigen::VectorXd::Ones(40), 6);
    CHECK(base.r == ones.r);
    const SignACF twos = sign_acf_bootstrap(e, Eigen::VectorXd::Constant(40, 2.0), 6);
    CHECK(twos.r == 2.0 * base.r);
    CHECK_ERROR_CODE(sign_acf_bootstrap(e, Eigen::VectorXd::Ones(39), 6), ErrorCode::invalid_argument);
  }

  TEST_CASE("null sign autocorrelations are small") {
    int good = 0;
    const int trials = 200;
    const Eigen::Index n = 2000;
    for (int trial = 0; trial < trials; ++trial) {
      Stream s(50, trial);
      Eigen::VectorXd e(n);
      for (Eigen::Index t = 0; t < n; ++t) e(t) = s.normal();
      const SignACF r = sign_acf(e, 6);
      good += r.r.cwiseAbs().maxCoeff() < 4.0 / std::sqrt(double(n));
    }
    CHECK(good >= 0.95 * trials);
  }

  TEST_CASE("wald statistic") {
    const Eigen::Vector2d theta(0.5, 0.2);
    Eigen::Matrix2d V;
    V << 0.04, 0.0, 0.0, 0.01;
    Eigen::MatrixXd G(1, 2);
    G << 0, 1;
    const TestOutcome t = wald_test(theta, V, G, Eigen::VectorXd::Zero(1));
    CHECK(t.statistic == doctest::Approx(4.0));
    CHECK(t.df == 1);
    CHECK(t.rejects(0.05));
    CHECK(t.reject_at.at(0.05));
    CHECK_FALSE(t.reject_at.at(0.01));

    const TestOutcome zero = wald_test(theta, V, G, Eigen::VectorXd::Constant(1, 0.2));
    CHECK(zero.statistic == 0.0);
    CHECK(zero.p_value == 1.0);
  }

  TEST_CASE("wald statistic is invariant to rescaling the restriction") {
    const Eigen::Vector3d theta(0.1, 0.5, -0.2);
    Eigen::Matrix3d V;
    V << 0.03, 0.01, 0.0, 0.01, 0.02, 0.005, 0.0, 0.005, 0.04;
    Eigen::MatrixXd G(2, 3);
    G << 0, 1, 0, 0, 1, 1;
    const Eigen::Vector2d r(0.4, 0.1);
    const double w = wald_test(theta, V, G, r).statistic;
    for (double c : {-3.0, 0.01, 250.0}) {
      CHECK(wald_test(theta, V, c * G, c * r).statistic == doctest::Approx(w).epsilon(1e-12));
    }
  }

  TEST_CASE("wald conditioning") {
    Eigen::MatrixXd G(1, 2);
    G << 0, 1;
    CHECK_ERROR_CODE(wald_test(Eigen::Vector2d(1, 1), Eigen::Matrix2d::Zero(), G, Eigen::VectorXd::Zero(1)),
                     ErrorCode::singular_constraint_cov);
    Eigen::Matrix2d V;
    V << 1.0, 0.0, 0.0, 1e-14;
    CHECK_ERROR_CODE(wald_test(Eigen::Vector2d(1, 1), V, Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero()),
                     ErrorCode::singular_constraint_cov);
    Eigen::MatrixXd dependent(2, 2);
    dependent << 1, 1, 2, 2;
    CHECK_ERROR_CODE(wald_test(Eigen::Vector2d(1, 1), Eigen::Matrix2d::Identity(), dependent, Eigen::Vector2d::Zero()),
                     ErrorCode::invalid_argument);
  }

  TEST_CASE("portmanteau statistic") {
    const double n = 200.0;
    SignACF r;
    r.M = 6;
    r.n = 200;
    r.r = Eigen::VectorXd::Zero(6);
    const Eigen::MatrixXd U = Eigen::MatrixXd::Identity(6, 6) / n;
    const TestOutcome zero = portmanteau_test(r, U);
    CHECK(zero.statistic == 0.0);
    CHECK(zero.p_value == 1.0);

    r.r(2) = 2.0 / std::sqrt(n);
    const TestOutcome t = portmanteau_test(r, U);
    CHECK(t.statistic == doctest::Approx(4.0));
    CHECK(t.df == 6);
    CHECK(t.p_value == doctest::Approx(0.676676).epsilon(1e-5));

    SignACF scaled = r;
    scaled.r *= 7.0;
    CHECK(portmanteau_test(scaled, 49.0 * U).statistic == doctest::Approx(t.statistic).epsilon(1e-12));
    CHECK_ERROR_CODE(portmanteau_test(r, Eigen::MatrixXd::Zero(6, 6)), ErrorCode::singular_u);
    CHECK_ERROR_CODE(portmanteau_test(r, Eigen::MatrixXd::Identity(5, 5)), ErrorCode::invalid_argument);
  }

  TEST_CASE("chi2 outcome") {
    const TestOutcome t = chi2_outcome(3.841459, 1);
    CHECK(t.p_value == doctest::Approx(0.05).epsilon(1e-5));
    CHECK(chi2_outcome(1e9, 3).rejects(0.01));
    CHECK(chi2_outcome(0.0, 3).rejects(1.0));
  }
}
