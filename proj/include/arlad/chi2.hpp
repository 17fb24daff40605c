#pragma once

namespace arlad {

/// Regularized lower incomplete gamma P(a, x): power series for x < a + 1,
/// continued fraction for the complement otherwise.
double regularized_gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed
/// without cancellation in the upper tail.
double regularized_gamma_q(double a, double x);

double chi2_cdf(double x, double df);
/// Upper tail P(X > x); equals 1 for x <= 0.
double chi2_sf(double x, double df);
/// x with chi2_cdf(x, df) = level, e.g. chi2_quantile(0.95, 1) = 3.841459.
/// Throws Error(domain_error) unless 0 < level < 1 and df > 0.
double chi2_quantile(double level, double df);

}  // namespace arlad
