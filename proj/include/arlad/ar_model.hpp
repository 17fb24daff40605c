#pragma once

#include <Eigen/Dense>

#include <optional>

namespace arlad {

/// An observed series, optionally with the simulation-only truth used by the
/// infeasible estimators and by recovery tests.
struct SeriesSample {
  Eigen::VectorXd y;
  std::optional<Eigen::VectorXd> true_g;
  std::optional<Eigen::VectorXd> true_u;

  Eigen::Index size() const { return y.size(); }
};

/// AR(p) coefficients ordered (mu, phi_1, ..., phi_p). Without an intercept
/// the vector is just (phi_1, ..., phi_p) and mu is fixed at zero.
struct ARSpec {
  int p = 1;
  Eigen::VectorXd theta;
  bool intercept = true;

  Eigen::VectorXd phi() const;
  double mu() const;
};

struct Design {
  Eigen::MatrixXd X;  // row t is (1, y_{t-1}, ..., y_{t-p})
  Eigen::VectorXd y;
};

/// Regression design with zero initial values: y_t = 0 for t <= 0, so every
/// observation contributes a row. intercept=false drops the leading ones
/// column (mu fixed at zero).
Design build_design(const SeriesSample& sample, int p, bool intercept = true);

/// eps_t(theta) = y_t - theta' Y_{t-1}, same zero-initial-value convention.
Eigen::VectorXd residuals(const SeriesSample& sample, const ARSpec& spec);

/// True iff every root of 1 - sum phi_i z^i lies outside the unit circle,
/// checked through the eigenvalues of the companion matrix.
bool is_stationary(const Eigen::VectorXd& phi);

/// Largest eigenvalue modulus of the companion matrix (0 for p = 0).
double spectral_radius(const Eigen::VectorXd& phi);

struct MaCoefficients {
  Eigen::VectorXd alpha;       // alpha_0 .. alpha_K, alpha_0 = 1
  double tail_estimate = 0.0;  // estimate of sum_{i > K} |alpha_i|
};

/// MA(infinity) weights of the stationary AR filter truncated at K.
/// Throws Error(not_stationary).
MaCoefficients ma_coefficients(const Eigen::VectorXd& phi, int K);

/// Same, with K the smallest truncation whose tail estimate is below
/// tail_tol, capped at max_K.
MaCoefficients ma_coefficients(const Eigen::VectorXd& phi,
                               double tail_tol = 1e-10, int max_K = 10000);

/// rho = mu / (1 - phi_1 - ... - phi_p), the mean of a stationary AR process.
double long_run_mean(double mu, const Eigen::VectorXd& phi);

/// y_t = mu + sum phi_i y_{t-i} + e_t with zero initial values.
Eigen::VectorXd ar_filter(const Eigen::VectorXd& phi, const Eigen::VectorXd& errors,
                          double mu = 0.0);

}  // namespace arlad
