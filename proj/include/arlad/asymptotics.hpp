#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace arlad {

/// Unit-variance, median-zero innovation laws.
enum class ErrorDist { std_laplace, std_t3, std_normal };

std::string_view name(ErrorDist dist);
/// Accepts SL / laplace / std_laplace, ST3 / t3 / std_t3, N / normal / std_normal.
ErrorDist parse_error_dist(std::string_view text);

/// Density at zero: 1/sqrt(2 pi), 1/sqrt(2), 2/pi for normal, Laplace, t3.
double f0_of(ErrorDist dist);
/// E|u|: sqrt(2/pi), 1/sqrt(2), 2/pi for normal, Laplace, t3.
double E_abs(ErrorDist dist);

/// Deterministic variance profile g on [0, 1], bounded away from 0 and
/// infinity.
class GProfile {
 public:
  enum class Kind { step, gradual, periodic, custom };

  /// The constant profile g = 1.
  GProfile() = default;

  /// e0 for x < tau, e1 for x >= tau.
  static GProfile step(double e0, double e1, double tau);
  /// 1 + (delta - 1) I(x >= 0.5).
  static GProfile abrupt(double delta) { return step(1.0, delta, 0.5); }
  /// 1 + (delta - 1) x^2.
  static GProfile gradual(double delta);
  /// sin(delta x) + 2.
  static GProfile periodic(double delta);
  static GProfile constant(double c) { return step(c, c, 0.5); }
  /// Arbitrary positive function; list its jump points so quadrature can
  /// split there.
  static GProfile custom(std::function<double(double)> f, std::vector<double> jumps = {});

  /// Parses "abrupt", "gradual", "periodic" with a delta.
  static GProfile from_name(std::string_view family, double delta);

  double operator()(double x) const;
  /// g(t/n) for t = 1..n.
  Eigen::VectorXd sample(Eigen::Index n) const;

  Kind kind() const { return kind_; }
  const std::vector<double>& jumps() const { return jumps_; }
  /// (e0, e1, tau) for step profiles, (delta) for gradual and periodic.
  const std::vector<double>& params() const { return params_; }
  std::string describe() const;

 private:
  Kind kind_ = Kind::step;
  std::vector<double> params_{1.0, 1.0, 0.5};
  std::vector<double> jumps_;
  std::function<double(double)> f_ = [](double) { return 1.0; };
};

/// g(x) for x in [0, 1]; Error(domain_error) outside.
double g_profile_eval(const GProfile& g, double x);

/// Adaptive Simpson on [a, b], split at the given interior points. Throws
/// Error(quadrature_failure) if the relative tolerance is not reached.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const std::vector<double>& splits = {}, double rel_tol = 1e-12);

struct EfficiencyConstants {
  double b1 = 0.0;  // weighted LADE, w = 1
  double b2 = 0.0;  // adaptive LADE
  double b3 = 0.0;  // LSE
  double b4 = 1.0;  // adaptive LSE
};

/// b1 = (1/4f0^2) int g^2 / (int g)^2, b2 = 1/4f0^2, b3 = int g^4 / (int g^2)^2,
/// b4 = 1, by quadrature.
EfficiencyConstants efficiency_constants(const GProfile& g, ErrorDist dist);
/// Same constants from the closed forms of the step profile.
EfficiencyConstants efficiency_constants_step(double e0, double e1, double tau, ErrorDist dist);

/// c_gw = int (g/w)^2 / (int g/w)^2; exactly 1 when w = g.
double c_gw(const GProfile& g, const GProfile& w);

/// Lambda with (r, s) entry lambda_|r-s| = sum_i alpha_i alpha_{i+|r-s|}
/// (unit-variance u). Throws Error(not_stationary).
Eigen::MatrixXd lambda_matrix(const Eigen::VectorXd& phi, double tail_tol = 1e-12);

/// The simplified covariances below hold only for i.i.d. u_t and a model
/// without intercept; both flags must be set explicitly.
struct SimplifiedRegime {
  bool iid_u = false;
  bool zero_intercept = false;
};

/// Asymptotic covariance of sqrt(n)(phi-hat - phi): c_gw / (4 f0^2) Lambda^-1.
Eigen::MatrixXd asy_cov_simplified(const GProfile& g, const GProfile& w, ErrorDist dist,
                                   const Eigen::VectorXd& phi, SimplifiedRegime regime);

/// Asymptotic covariance of sqrt(n) r-hat at lags 1..M:
/// I_M - (2 - c_gw) K' Lambda^-1 K with K(r, k) = E|u| alpha_{k-r} for k >= r.
Eigen::MatrixXd portmanteau_cov_iid(const GProfile& g, const GProfile& w, ErrorDist dist,
                                    const Eigen::VectorXd& phi, int M,
                                    SimplifiedRegime regime);

}  // namespace arlad
