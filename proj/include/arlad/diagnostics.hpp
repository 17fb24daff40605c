#pragma once

#include <Eigen/Dense>

#include <map>

namespace arlad {

inline constexpr int kDefaultMaxLag = 6;
/// Largest condition number accepted for a covariance that gets inverted.
inline constexpr double kMaxConditionNumber = 1e12;

/// sgn(a) = I(a > 0) - I(a < 0); zero residuals are neutral.
inline double sign_of(double a) { return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0); }

/// Mean-corrected autocorrelations of sgn(eps_t) at lags 1..M.
struct SignACF {
  Eigen::VectorXd r;
  int M = 0;
  Eigen::Index n = 0;
};

/// r_k = sum_{t>k} (s_t - sbar)(s_{t-k} - sbar) / sum_t (s_t - sbar)^2.
/// Needs n > M >= 1. Throws Error(zero_denominator) for a constant sign series.
SignACF sign_acf(const Eigen::VectorXd& residuals, int M);

/// Bootstrap version: the numerator term at t carries w*_t, the denominator
/// is unweighted. With w* = 1 this is exactly sign_acf.
SignACF sign_acf_bootstrap(const Eigen::VectorXd& residuals_star,
                           const Eigen::VectorXd& rw_weights, int M);

struct TestOutcome {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  /// Decisions at the conventional levels 0.10, 0.05 and 0.01.
  std::map<double, bool> reject_at;

  bool rejects(double level) const { return p_value <= level; }
};

/// Chi-square reference outcome for a nonnegative statistic.
TestOutcome chi2_outcome(double statistic, int df);

/// W = (G theta - r)' (G V G')^{-1} (G theta - r) against chi2_s.
/// G must have full row rank s. Throws Error(singular_constraint_cov) when
/// G V G' is not positive definite or its condition number exceeds
/// kMaxConditionNumber.
TestOutcome wald_test(const Eigen::VectorXd& theta, const Eigen::MatrixXd& V,
                      const Eigen::MatrixXd& Gamma, const Eigen::VectorXd& r);

/// S(M) = r' U^{-1} r against chi2_M. Throws Error(singular_u) under the same
/// conditioning rule.
TestOutcome portmanteau_test(const SignACF& acf, const Eigen::MatrixXd& U);

}  // namespace arlad
