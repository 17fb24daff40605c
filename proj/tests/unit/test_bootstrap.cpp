#include "arlad/bootstrap.hpp"
#include "arlad/dgp.hpp"

#include "support/test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace arlad;

namespace {

SeriesSample homoskedastic(Eigen::Index n, std::uint64_t seed) {
  DGPSpec spec;
  spec.n = n;
  Stream s(seed, 0, Purpose::innovation);
  return gen_sample(spec, s);
}

FitOptions no_intercept() {
  FitOptions fo;
  fo.intercept = false;
  return fo;
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues().minCoeff();
}

}  // namespace

TEST_SUITE("bootstrap") {
  TEST_CASE("multipliers are standard exponential") {
    Stream s(4, 0, Purpose::rw_weights);
    const Eigen::VectorXd w = draw_rw_weights(1000000, s);
    CHECK((w.array() >= 0.0).all());
    CHECK(std::abs(w.mean() - 1.0) < 0.01);
    CHECK(std::abs((w.array() - w.mean()).square().mean() - 1.0) < 0.02);
    CHECK(rw_weights_for(9, 3, 50) == rw_weights_for(9, 3, 50));
    CHECK(rw_weights_for(9, 3, 50) != rw_weights_for(9, 4, 50));
  }

  TEST_CASE("second moment about the center") {
    RWConfig cfg;
    std::vector<std::optional<Eigen::VectorXd>> reps{
        Eigen::Vector2d(1, 0), Eigen::Vector2d(-1, 0), Eigen::Vector2d(0, 2), std::nullopt};
    const BootstrapCov c = second_moment_about(Eigen::Vector2d::Zero(), reps, cfg);
    CHECK(c.J_effective == 3);
    CHECK(c.J_dropped == 1);
    CHECK(c.warning);
    Eigen::Matrix2d expected;
    expected << 2.0 / 3.0, 0.0, 0.0, 4.0 / 3.0;
    CHECK((c.matrix - expected).norm() < 1e-15);

    cfg.mean_center = true;
    const BootstrapCov m = second_moment_about(Eigen::Vector2d(5, 5), reps, cfg);
    Eigen::Matrix2d centred;
    centred << 2.0 / 3.0, 0.0, 0.0, 4.0 / 3.0 - 4.0 / 9.0;
    CHECK((m.matrix - centred).norm() < 1e-14);
  }

  TEST_CASE("a replicate equal to the estimate gives a zero matrix") {
    RWConfig cfg;
    cfg.J = 40;
    const Eigen::Vector2d theta(0.3, -0.1);
    const BootstrapCov c =
        rw_covariance(30, theta, [&](const Eigen::VectorXd&) { return std::optional(Eigen::VectorXd(theta)); }, cfg);
    CHECK(c.matrix.isZero(0.0));
    CHECK(c.J_effective == 40);
    CHECK_FALSE(c.warning);
  }

  TEST_CASE("too few usable replicates") {
    RWConfig cfg;
    cfg.J = 10;
    int calls = 0;
    CHECK_ERROR_CODE(rw_covariance(5, Eigen::VectorXd::Zero(1),
                                   [&](const Eigen::VectorXd&) -> std::optional<Eigen::VectorXd> {
                                     ++calls;
                                     return std::nullopt;
                                   },
                                   cfg),
                     ErrorCode::too_few_replications);
    CHECK(calls == 10);
    cfg.J = 1;
    CHECK_ERROR_CODE(rw_covariance(5, Eigen::VectorXd::Zero(1),
                                   [](const Eigen::VectorXd&) { return std::optional(Eigen::VectorXd::Zero(1).eval()); },
                                   cfg),
                     ErrorCode::invalid_argument);
  }

  TEST_CASE("results are bit-identical across thread counts") {
    const SeriesSample s = homoskedastic(200, 1);
    const FitResult base = fit(s, 2, AladeFeasible{});
    RWConfig cfg;
    cfg.J = 200;
    cfg.seed = 77;
    cfg.threads = 1;
    const RWBootstrap a = rw_bootstrap(s, base, 6, cfg);
    for (unsigned t : {2u, 5u}) {
      cfg.threads = t;
      const RWBootstrap b = rw_bootstrap(s, base, 6, cfg);
      CHECK(a.theta.matrix == b.theta.matrix);
      CHECK(a.racf.matrix == b.racf.matrix);
    }
    cfg.threads = 3;
    CHECK(rw_covariance_theta(s, base, cfg).matrix == a.theta.matrix);
    CHECK(rw_covariance_racf(s, base, 6, cfg).matrix == a.racf.matrix);
  }

  TEST_CASE("covariances are symmetric and positive semidefinite") {
    for (std::uint64_t seed : {2, 3, 4}) {
      const SeriesSample s = homoskedastic(150, seed);
      RWConfig cfg;
      cfg.J = 150;
      cfg.seed = seed;
      const RWBootstrap b = rw_bootstrap(s, fit(s, 2, Lade{}), 6, cfg);
      CHECK(b.theta.matrix == b.theta.matrix.transpose());
      CHECK(b.racf.matrix == b.racf.matrix.transpose());
      CHECK(min_eigenvalue(b.theta.matrix) >= -1e-10);
      CHECK(min_eigenvalue(b.racf.matrix) >= -1e-10);
    }
  }

  TEST_CASE("slope SD matches the homoskedastic asymptotic value") {
    // sqrt(b2 / (lambda_0 n)) = sqrt(0.5 * 0.75 / 400)
    const double target = std::sqrt(0.375 / 400.0);
    double mean_sd = 0.0;
    const int samples = 8;
    for (int i = 0; i < samples; ++i) {
      const SeriesSample s = homoskedastic(400, 100 + i);
      RWConfig cfg;
      cfg.J = 500;
      cfg.seed = i;
      cfg.threads = 0;
      mean_sd += std::sqrt(rw_covariance_theta(s, 1, Lade{}, cfg, no_intercept()).matrix(0, 0));
    }
    mean_sd /= samples;
    CHECK(std::abs(mean_sd / target - 1.0) < 0.2);
  }

  TEST_CASE("sign ACF covariance matches its asymptotic value") {
    // n U-hat averaged over samples against I - K' Lambda^-1 K, whose
    // diagonal for AR(1) phi = 0.5 and unit-variance Laplace u is
    // 1 - 0.375 * 0.25^(k-1).
    const int samples = 20;
    const Eigen::Index n = 400;
    Eigen::VectorXd mean_diag = Eigen::VectorXd::Zero(6);
    for (int i = 0; i < samples; ++i) {
      const SeriesSample s = homoskedastic(n, 200 + i);
      RWConfig cfg;
      cfg.J = 500;
      cfg.seed = 5 + i;
      cfg.threads = 0;
      const BootstrapCov U = rw_covariance_racf(s, 1, Lade{}, 6, cfg, no_intercept());
      mean_diag += static_cast<double>(n) * U.matrix.diagonal() / samples;
    }
    for (int k = 1; k <= 6; ++k) {
      CAPTURE(k);
      CAPTURE(mean_diag(k - 1));
      CHECK(mean_diag(k - 1) == doctest::Approx(1.0 - 0.375 * std::pow(0.25, k - 1)).epsilon(0.15));
    }
  }

  TEST_CASE("estimates settle as J grows") {
    const SeriesSample s = homoskedastic(100, 31);
    const FitResult base = fit(s, 1, Lade{}, no_intercept());
    RWConfig ref_cfg;
    ref_cfg.J = 8000;
    ref_cfg.seed = 1;
    ref_cfg.threads = 0;
    const Eigen::MatrixXd ref = rw_covariance_racf(s, base, 3, ref_cfg, no_intercept()).matrix;
    std::vector<double> small, large;
    for (int trial = 0; trial < 20; ++trial) {
      RWConfig cfg;
      cfg.seed = 1000 + trial;
      cfg.threads = 0;
      cfg.J = 250;
      small.push_back((rw_covariance_racf(s, base, 3, cfg, no_intercept()).matrix - ref).norm());
      cfg.J = 1000;
      large.push_back((rw_covariance_racf(s, base, 3, cfg, no_intercept()).matrix - ref).norm());
    }
    std::nth_element(small.begin(), small.begin() + 10, small.end());
    std::nth_element(large.begin(), large.begin() + 10, large.end());
    CHECK(large[10] < small[10]);
  }
}
