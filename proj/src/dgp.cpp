#include "arlad/dgp.hpp"

#include "arlad/error.hpp"

#include <cmath>
#include <numbers>

namespace arlad {

double draw_innovation(ErrorDist dist, Stream& stream) {
  switch (dist) {
    case ErrorDist::std_normal: return stream.normal();
    case ErrorDist::std_laplace: {
      const double u = stream.uniform();
      const double b = 1.0 / std::numbers::sqrt2;
      return u < 0.5 ? b * std::log(2.0 * u) : -b * std::log(2.0 * (1.0 - u));
    }
    case ErrorDist::std_t3: {
      const double z = stream.normal();
      double chi2 = 0.0;
      for (int i = 0; i < 3; ++i) {
        const double e = stream.normal();
        chi2 += e * e;
      }
      return z / std::sqrt(chi2);
    }
  }
  return 0.0;
}

Eigen::VectorXd gen_garch_u(Eigen::Index n, int burn_in, const GarchParams& garch,
                            ErrorDist dist, Stream& stream) {
  if (garch.alpha < 0.0 || garch.beta < 0.0 || !(garch.omega > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "GARCH parameters must be nonnegative, omega > 0");
  }
  if (garch.alpha + garch.beta >= 1.0) {
    throw Error(ErrorCode::nonstationary_garch, "GARCH needs alpha + beta < 1");
  }
  if (n < 0 || burn_in < 0) throw Error(ErrorCode::invalid_argument, "negative length");
  Eigen::VectorXd u(n);
  double sigma2 = garch.omega / (1.0 - garch.alpha - garch.beta);
  double prev_u = 0.0;
  bool first = true;
  for (Eigen::Index t = -burn_in; t < n; ++t) {
    if (!first) sigma2 = garch.omega + garch.alpha * prev_u * prev_u + garch.beta * sigma2;
    first = false;
    prev_u = draw_innovation(dist, stream) * std::sqrt(sigma2);
    if (t >= 0) u(t) = prev_u;
  }
  return u;
}

SeriesSample sample_from_u(const Eigen::VectorXd& phi, const GProfile& g,
                           const Eigen::VectorXd& u) {
  SeriesSample s;
  s.true_g = g.sample(u.size());
  s.true_u = u;
  s.y = ar_filter(phi, s.true_g->cwiseProduct(u));
  return s;
}

SeriesSample gen_sample(const DGPSpec& spec, Stream& stream) {
  if (spec.n < 1) throw Error(ErrorCode::invalid_argument, "sample length must be positive");
  if (!is_stationary(spec.phi)) {
    throw Error(ErrorCode::not_stationary, "AR coefficients are not stationary");
  }
  return sample_from_u(spec.phi, spec.g,
                       gen_garch_u(spec.n, spec.burn_in, spec.garch, spec.innovation, stream));
}

}  // namespace arlad
