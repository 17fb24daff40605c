#include "arlad/ar_model.hpp"

#include "arlad/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace arlad {

Eigen::VectorXd ARSpec::phi() const {
  return intercept ? Eigen::VectorXd(theta.tail(theta.size() - 1)) : theta;
}

double ARSpec::mu() const { return intercept ? theta(0) : 0.0; }

Design build_design(const SeriesSample& sample, int p, bool intercept) {
  if (p < 0) throw Error(ErrorCode::invalid_argument, "AR order must be >= 0");
  if (!intercept && p == 0) {
    throw Error(ErrorCode::invalid_argument,
                "a model without intercept needs p >= 1");
  }
  if (!sample.y.allFinite()) {
    throw Error(ErrorCode::non_finite, "series contains NaN or Inf");
  }
  const Eigen::Index n = sample.size();
  const int offset = intercept ? 1 : 0;
  Design d;
  d.y = sample.y;
  d.X = Eigen::MatrixXd::Zero(n, p + offset);
  if (intercept) d.X.col(0).setOnes();
  for (int lag = 1; lag <= p; ++lag) {
    for (Eigen::Index t = lag; t < n; ++t) d.X(t, offset + lag - 1) = sample.y(t - lag);
  }
  return d;
}

Eigen::VectorXd residuals(const SeriesSample& sample, const ARSpec& spec) {
  const int expected = spec.p + (spec.intercept ? 1 : 0);
  if (spec.theta.size() != expected) {
    throw Error(ErrorCode::invalid_argument,
                "theta length does not match the AR order");
  }
  const Design d = build_design(sample, spec.p, spec.intercept);
  return d.y - d.X * spec.theta;
}

namespace {

Eigen::MatrixXd companion(const Eigen::VectorXd& phi) {
  const Eigen::Index p = phi.size();
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(p, p);
  C.row(0) = phi.transpose();
  for (Eigen::Index i = 1; i < p; ++i) C(i, i - 1) = 1.0;
  return C;
}

}  // namespace

double spectral_radius(const Eigen::VectorXd& phi) {
  if (phi.size() == 0) return 0.0;
  if (!phi.allFinite()) throw Error(ErrorCode::non_finite, "phi is not finite");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion(phi), false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_stationary(const Eigen::VectorXd& phi) { return spectral_radius(phi) < 1.0; }

MaCoefficients ma_coefficients(const Eigen::VectorXd& phi, int K) {
  if (K < 0) throw Error(ErrorCode::invalid_argument, "truncation K must be >= 0");
  const double rho = spectral_radius(phi);
  if (rho >= 1.0) {
    throw Error(ErrorCode::not_stationary, "AR polynomial has a root on or inside the unit circle");
  }
  const Eigen::Index p = phi.size();
  MaCoefficients out;
  out.alpha = Eigen::VectorXd::Zero(K + 1);
  out.alpha(0) = 1.0;
  for (int i = 1; i <= K; ++i) {
    double a = 0.0;
    for (Eigen::Index j = 1; j <= std::min<Eigen::Index>(i, p); ++j) {
      a += phi(j - 1) * out.alpha(i - j);
    }
    out.alpha(i) = a;
  }
  // The weights decay like rho^i up to a polynomial factor; extrapolate the
  // last p magnitudes geometrically with a ratio between rho and 1.
  if (p > 0) {
    const double ratio = 0.5 * (1.0 + rho);
    const Eigen::Index window = std::min<Eigen::Index>(p, K + 1);
    const double last = out.alpha.tail(window).cwiseAbs().maxCoeff();
    out.tail_estimate = last * ratio / (1.0 - ratio);
  }
  return out;
}

MaCoefficients ma_coefficients(const Eigen::VectorXd& phi, double tail_tol, int max_K) {
  const double rho = spectral_radius(phi);
  if (rho >= 1.0) {
    throw Error(ErrorCode::not_stationary, "AR polynomial has a root on or inside the unit circle");
  }
  if (phi.size() == 0 || rho == 0.0) {
    return ma_coefficients(phi, static_cast<int>(phi.size()));
  }
  // Start from the geometric guess and grow until the estimate is met.
  const double ratio = 0.5 * (1.0 + rho);
  int K = static_cast<int>(std::ceil(std::log(tail_tol) / std::log(ratio)));
  K = std::clamp(K, static_cast<int>(phi.size()), max_K);
  for (;;) {
    MaCoefficients out = ma_coefficients(phi, K);
    if (out.tail_estimate < tail_tol || K >= max_K) return out;
    K = std::min(max_K, 2 * K);
  }
}

double long_run_mean(double mu, const Eigen::VectorXd& phi) {
  const double denom = 1.0 - phi.sum();
  if (denom == 0.0) throw Error(ErrorCode::not_stationary, "unit root: 1 - sum(phi) = 0");
  return mu / denom;
}

Eigen::VectorXd ar_filter(const Eigen::VectorXd& phi, const Eigen::VectorXd& errors,
                          double mu) {
  const Eigen::Index n = errors.size();
  const Eigen::Index p = phi.size();
  Eigen::VectorXd y(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    double v = mu + errors(t);
    for (Eigen::Index i = 1; i <= std::min(p, t); ++i) v += phi(i - 1) * y(t - i);
    y(t) = v;
  }
  return y;
}

}  // namespace arlad
