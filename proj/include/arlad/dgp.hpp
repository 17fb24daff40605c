#pragma once

#include "arlad/ar_model.hpp"
#include "arlad/asymptotics.hpp"
#include "arlad/rng.hpp"

#include <Eigen/Dense>

namespace arlad {

/// sigma_t^2 = omega + alpha u_{t-1}^2 + beta sigma_{t-1}^2.
struct GarchParams {
  double alpha = 0.0;
  double beta = 0.0;
  double omega = 0.1;
};

/// y_t = phi' (y_{t-1}, ..., y_{t-p}) + g(t/n) u_t with u_t = eta_t sigma_t,
/// zero initial values and mu = 0.
struct DGPSpec {
  Eigen::VectorXd phi = Eigen::VectorXd::Constant(1, 0.5);
  GProfile g = GProfile::constant(1.0);
  GarchParams garch;
  ErrorDist innovation = ErrorDist::std_laplace;
  Eigen::Index n = 200;
  int burn_in = 500;
};

/// One unit-variance draw: normal by Box-Muller, Laplace(0, 1/sqrt 2) by
/// inverse CDF, t3/sqrt 3 as Z / sqrt(chi2_3).
double draw_innovation(ErrorDist dist, Stream& stream);

/// GARCH(1,1) errors seeded at the stationary variance omega / (1 - alpha -
/// beta); the first burn_in values are discarded. Throws
/// Error(nonstationary_garch) if alpha + beta >= 1.
Eigen::VectorXd gen_garch_u(Eigen::Index n, int burn_in, const GarchParams& garch,
                            ErrorDist dist, Stream& stream);

/// Series with true_g = g(t/n) and true_u = u recorded.
SeriesSample gen_sample(const DGPSpec& spec, Stream& stream);

/// Same recursion from given u (testing hook).
SeriesSample sample_from_u(const Eigen::VectorXd& phi, const GProfile& g,
                           const Eigen::VectorXd& u);

}  // namespace arlad
