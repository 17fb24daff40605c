#include "arlad/diagnostics.hpp"

#include "arlad/chi2.hpp"
#include "arlad/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace arlad {
namespace {

void check_lag(Eigen::Index n, int M) {
  if (M < 1) throw Error(ErrorCode::invalid_argument, "max lag M must be >= 1");
  if (n <= M) {
    throw Error(ErrorCode::invalid_argument,
                "need n > M (n=" + std::to_string(n) + ", M=" + std::to_string(M) + ")");
  }
}

SignACF acf_impl(const Eigen::VectorXd& residuals, const Eigen::VectorXd* weights, int M) {
  const Eigen::Index n = residuals.size();
  check_lag(n, M);
  if (!residuals.allFinite()) throw Error(ErrorCode::non_finite, "residuals are not finite");

  // Centered signs scaled by n: n s_t - sum s is an integer, so every r_k is
  // a single rounding of an exact ratio whenever the sums fit in 53 bits.
  Eigen::VectorXd s(n);
  for (Eigen::Index t = 0; t < n; ++t) s(t) = sign_of(residuals(t));
  const double total = s.sum();
  s = (static_cast<double>(n) * s.array() - total).matrix();
  const double denom = s.squaredNorm();
  if (!(denom > 0.0)) {
    throw Error(ErrorCode::zero_denominator, "residual signs are constant");
  }

  SignACF out;
  out.M = M;
  out.n = n;
  out.r.resize(M);
  for (int k = 1; k <= M; ++k) {
    const Eigen::Index len = n - k;
    auto lead = s.tail(len).array();
    auto lag = s.head(len).array();
    const double num = weights ? (weights->tail(len).array() * lead * lag).sum()
                               : (lead * lag).sum();
    out.r(k - 1) = num / denom;
  }
  return out;
}

// Inverts a symmetric positive definite matrix through its eigensystem after
// the conditioning check.
Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& A, ErrorCode code, const char* what) {
  if (!A.allFinite()) throw Error(code, std::string(what) + " is not finite");
  const Eigen::MatrixXd sym = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  const double lo = ev.minCoeff();
  const double hi = ev.maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxConditionNumber) {
    throw Error(code, std::string(what) + " is singular or ill-conditioned (eigenvalues " +
                          std::to_string(lo) + " .. " + std::to_string(hi) + ")");
  }
  return eig.eigenvectors() * ev.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

SignACF sign_acf(const Eigen::VectorXd& residuals, int M) {
  return acf_impl(residuals, nullptr, M);
}

SignACF sign_acf_bootstrap(const Eigen::VectorXd& residuals_star,
                           const Eigen::VectorXd& rw_weights, int M) {
  if (rw_weights.size() != residuals_star.size()) {
    throw Error(ErrorCode::invalid_argument, "one multiplier per residual required");
  }
  return acf_impl(residuals_star, &rw_weights, M);
}

TestOutcome chi2_outcome(double statistic, int df) {
  if (std::isnan(statistic)) throw Error(ErrorCode::non_finite, "test statistic is NaN");
  TestOutcome out;
  out.statistic = std::max(statistic, 0.0);
  out.df = df;
  out.p_value = chi2_sf(out.statistic, df);
  for (double level : {0.10, 0.05, 0.01}) out.reject_at[level] = out.p_value <= level;
  return out;
}

TestOutcome wald_test(const Eigen::VectorXd& theta, const Eigen::MatrixXd& V,
                      const Eigen::MatrixXd& Gamma, const Eigen::VectorXd& r) {
  const Eigen::Index k = theta.size();
  const Eigen::Index s = Gamma.rows();
  if (s < 1 || Gamma.cols() != k || r.size() != s || V.rows() != k || V.cols() != k) {
    throw Error(ErrorCode::invalid_argument, "wald_test: inconsistent dimensions");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(Gamma);
  if (lu.rank() < s) throw Error(ErrorCode::invalid_argument, "Gamma must have full row rank");

  const Eigen::VectorXd d = Gamma * theta - r;
  const Eigen::MatrixXd C = Gamma * V * Gamma.transpose();
  const Eigen::MatrixXd Cinv =
      checked_inverse(C, ErrorCode::singular_constraint_cov, "Gamma V Gamma'");
  return chi2_outcome(d.dot(Cinv * d), static_cast<int>(s));
}

TestOutcome portmanteau_test(const SignACF& acf, const Eigen::MatrixXd& U) {
  const Eigen::Index M = acf.r.size();
  if (M < 1 || U.rows() != M || U.cols() != M) {
    throw Error(ErrorCode::invalid_argument, "portmanteau_test: U must be M x M");
  }
  const Eigen::MatrixXd Uinv = checked_inverse(U, ErrorCode::singular_u, "U");
  return chi2_outcome(acf.r.dot(Uinv * acf.r), static_cast<int>(M));
}

}  // namespace arlad
