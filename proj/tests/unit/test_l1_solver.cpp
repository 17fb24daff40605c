#include "arlad/l1_solver.hpp"
#include "arlad/rng.hpp"

#include "support/oracles.hpp"
#include "support/test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

using namespace arlad;

namespace {

L1Problem location(std::vector<double> y, std::vector<double> v = {}) {
  L1Problem p;
  const auto n = static_cast<Eigen::Index>(y.size());
  p.design = Eigen::MatrixXd::Ones(n, 1);
  p.response = Eigen::Map<Eigen::VectorXd>(y.data(), n);
  p.inv_weights = v.empty() ? Eigen::VectorXd::Ones(n)
                            : Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(v.data(), n));
  return p;
}

// Random instance with an intercept and k-1 continuous regressors.
L1Problem random_instance(Stream& s, int n, int k, bool multipliers) {
  L1Problem p;
  p.design.resize(n, k);
  p.response.resize(n);
  p.inv_weights.resize(n);
  for (int t = 0; t < n; ++t) {
    p.design(t, 0) = 1.0;
    for (int j = 1; j < k; ++j) p.design(t, j) = s.normal();
    p.response(t) = 0.3 * p.design.row(t).sum() + s.normal() * (1.0 + s.uniform());
    p.inv_weights(t) = 0.2 + 2.0 * s.uniform();
  }
  if (multipliers) {
    Eigen::VectorXd m(n);
    for (int t = 0; t < n; ++t) m(t) = s.exponential();
    p.multipliers = m;
  }
  return p;
}

}  // namespace

TEST_SUITE("l1_solver") {
  TEST_CASE("median of three") {
    const L1Solution s = solve_weighted_lad(location({1, 2, 3}));
    CHECK(s.theta(0) == doctest::Approx(2.0));
    CHECK(s.objective == doctest::Approx(2.0));
    CHECK(s.status == SolverStatus::optimal);
  }

  TEST_CASE("weighted location example") {
    const L1Solution s = solve_weighted_lad(location({0, 1, 4}, {1, 1, 10}));
    CHECK(s.theta(0) == doctest::Approx(4.0));
    CHECK(s.objective == doctest::Approx(7.0));
  }

  TEST_CASE("flat optimum is flagged") {
    const L1Solution s = solve_weighted_lad(location({1, 2}));
    CHECK(s.objective == doctest::Approx(1.0));
    CHECK(s.status == SolverStatus::degenerate_tie);
  }

  TEST_CASE("weighted median") {
    const std::vector<double> a{1, 2, 10}, wa{1, 1, 1};
    CHECK(weighted_median(a, wa) == 2.0);
    const std::vector<double> b{0, 1, 4}, wb{1, 1, 10};
    CHECK(weighted_median(b, wb) == 4.0);
    const std::vector<double> c{5}, wc{3};
    CHECK(weighted_median(c, wc) == 5.0);
    const std::vector<double> d{4, 1, 3, 2}, wd{1, 1, 1, 1};
    CHECK(weighted_median(d, wd) == 2.0);
    const std::vector<double> e;
    CHECK_ERROR_CODE(weighted_median(e, e), ErrorCode::invalid_argument);
    const std::vector<double> f{1, 2}, wf{1, 0};
    CHECK_ERROR_CODE(weighted_median(f, wf), ErrorCode::invalid_argument);
  }

  TEST_CASE("location problems agree with the weighted median") {
    Stream s(3);
    for (int rep = 0; rep < 200; ++rep) {
      const int n = 1 + static_cast<int>(s.uniform() * 15);
      std::vector<double> y(n), v(n);
      for (int i = 0; i < n; ++i) {
        y[i] = std::round(s.normal() * 4.0);
        v[i] = 0.5 + s.uniform();
      }
      const L1Solution sol = solve_weighted_lad(location(y, v));
      const double med = weighted_median(y, v);
      CHECK(sol.objective == doctest::Approx(l1_objective(location(y, v), Eigen::VectorXd::Constant(1, med))).epsilon(1e-12));
    }
  }

  TEST_CASE("random instances match vertex enumeration") {
    Stream s(2024);
    for (int rep = 0; rep < 300; ++rep) {
      const int k = 1 + rep % 3;
      const int n = k + 1 + static_cast<int>(s.uniform() * (30 - k));
      const L1Problem p = random_instance(s, n, k, rep % 2 == 1);
      const L1Solution sol = solve_weighted_lad(p);
      const auto ref = oracle::vertex_enumeration(
          p.design, p.response, p.inv_weights,
          p.multipliers.value_or(Eigen::VectorXd::Ones(n)));
      CHECK(std::abs(sol.objective - ref.objective) <= 1e-9 * std::max(1.0, ref.objective));
      CHECK(sol.objective == doctest::Approx(l1_objective(p, sol.theta)).epsilon(1e-12));
    }
  }

  TEST_CASE("objective includes multipliers") {
    L1Problem p = location({0, 10});
    p.multipliers = Eigen::Vector2d(3.0, 0.5);
    const Eigen::VectorXd theta = Eigen::VectorXd::Constant(1, 4.0);
    CHECK(l1_objective(p, theta) == doctest::Approx(3.0 * 4.0 + 0.5 * 6.0));
    CHECK(solve_weighted_lad(p).theta(0) == doctest::Approx(0.0));
  }

  TEST_CASE("weight scaling leaves the argmin unchanged exactly") {
    Stream s(99);
    for (int rep = 0; rep < 50; ++rep) {
      L1Problem p = random_instance(s, 25, 3, false);
      const L1Solution a = solve_weighted_lad(p);
      p.inv_weights *= 8.0;
      const L1Solution b = solve_weighted_lad(p);
      CHECK(a.theta == b.theta);
      CHECK(b.objective == doctest::Approx(8.0 * a.objective).epsilon(1e-12));
    }
  }

  TEST_CASE("exact data are recovered with zero objective") {
    Stream s(5);
    L1Problem p = random_instance(s, 20, 3, false);
    const Eigen::Vector3d theta0(0.5, -1.25, 2.0);
    p.response = p.design * theta0;
    const L1Solution sol = solve_weighted_lad(p);
    CHECK((sol.theta - theta0).norm() < 1e-12);
    CHECK(sol.objective < 1e-12);
  }

  TEST_CASE("scale equivariance") {
    const L1Solution a = solve_weighted_lad(location({1, 7, 3, 9, 4}));
    const L1Solution b = solve_weighted_lad(location({-2.5, -17.5, -7.5, -22.5, -10}));
    CHECK(b.theta(0) == doctest::Approx(-2.5 * a.theta(0)));
  }

  TEST_CASE("warm start reaches the same optimum") {
    Stream s(17);
    for (int rep = 0; rep < 30; ++rep) {
      L1Problem p = random_instance(s, 30, 3, false);
      const L1Solution cold = solve_weighted_lad(p);
      Eigen::VectorXd m(30);
      for (int t = 0; t < 30; ++t) m(t) = s.exponential();
      p.multipliers = m;
      SolverOptions warm;
      warm.initial_basis = cold.basis;
      const L1Solution a = solve_weighted_lad(p, warm);
      const L1Solution b = solve_weighted_lad(p);
      CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-12));
    }
  }

  TEST_CASE("basis rows are interpolated") {
    Stream s(23);
    const L1Problem p = random_instance(s, 25, 3, false);
    const L1Solution sol = solve_weighted_lad(p);
    REQUIRE(sol.basis.size() == 3);
    for (int i : sol.basis) {
      CHECK(std::abs(p.response(i) - p.design.row(i).dot(sol.theta)) < 1e-10);
    }
  }

  TEST_CASE("input validation") {
    L1Problem p = location({1, 2, 3});
    p.response(1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_ERROR_CODE(solve_weighted_lad(p), ErrorCode::non_finite);

    L1Problem q = location({1, 2, 3});
    q.inv_weights(0) = 0.0;
    CHECK_ERROR_CODE(solve_weighted_lad(q), ErrorCode::invalid_argument);

    L1Problem r = location({1, 2, 3});
    r.multipliers = Eigen::Vector3d(1.0, -1.0, 1.0);
    CHECK_ERROR_CODE(solve_weighted_lad(r), ErrorCode::invalid_argument);

    L1Problem d;
    d.design.resize(4, 2);
    d.design << 1, 2, 1, 2, 1, 2, 1, 2;
    d.response = Eigen::Vector4d(1, 2, 3, 4);
    d.inv_weights = Eigen::Vector4d::Ones();
    CHECK_ERROR_CODE(solve_weighted_lad(d), ErrorCode::rank_deficient);
  }
}
