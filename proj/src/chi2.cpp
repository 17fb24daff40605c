#include "arlad/chi2.hpp"

#include "arlad/error.hpp"

#include <cmath>
#include <limits>

namespace arlad {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxTerms = 100000;

void check_args(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error(ErrorCode::domain_error, "incomplete gamma needs a > 0");
  }
  if (std::isnan(x)) throw Error(ErrorCode::domain_error, "incomplete gamma at NaN");
}

double log_prefactor(double a, double x) { return -x + a * std::log(x) - std::lgamma(a); }

double series_p(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int i = 0; i < kMaxTerms; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) {
      return sum * std::exp(log_prefactor(a, x));
    }
  }
  throw Error(ErrorCode::domain_error, "incomplete gamma series did not converge");
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
double continued_fraction_q(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return std::exp(log_prefactor(a, x)) * h;
  }
  throw Error(ErrorCode::domain_error, "incomplete gamma continued fraction did not converge");
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  check_args(a, x);
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return x < a + 1.0 ? series_p(a, x) : 1.0 - continued_fraction_q(a, x);
}

double regularized_gamma_q(double a, double x) {
  check_args(a, x);
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return x < a + 1.0 ? 1.0 - series_p(a, x) : continued_fraction_q(a, x);
}

double chi2_cdf(double x, double df) { return regularized_gamma_p(0.5 * df, 0.5 * x); }

double chi2_sf(double x, double df) { return regularized_gamma_q(0.5 * df, 0.5 * x); }

double chi2_quantile(double level, double df) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::domain_error, "chi2_quantile needs 0 < level < 1");
  }
  if (!(df > 0.0) || !std::isfinite(df)) {
    throw Error(ErrorCode::domain_error, "chi2_quantile needs df > 0");
  }
  const double a = 0.5 * df;
  // Solve in whichever tail is smaller to keep relative accuracy.
  const bool upper = level > 0.5;
  const double target = upper ? 1.0 - level : level;
  auto residual = [&](double x) {
    return upper ? target - chi2_sf(x, df) : chi2_cdf(x, df) - target;
  };
  auto density = [&](double x) {
    const double h = 0.5 * x;
    return 0.5 * std::exp((a - 1.0) * std::log(h) - h - std::lgamma(a));
  };

  double lo = 0.0;
  double hi = std::max(1.0, df);
  while (residual(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = residual(x);
    if (f == 0.0) return x;
    if (f < 0.0) lo = x; else hi = x;
    const double slope = density(x);
    double next = slope > 0.0 ? x - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * x || hi - lo <= 1e-15 * hi) return next;
    x = next;
  }
  return x;
}

}  // namespace arlad
