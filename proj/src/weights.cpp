#include "arlad/weights.hpp"

#include "arlad/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace arlad {
namespace {

// exp(-x^2/2) underflows to zero beyond this many standard deviations, so
// truncating the gaussian sum there changes nothing.
constexpr double kGaussianCutoff = 38.7;

void check_abs_residuals(const Eigen::VectorXd& a) {
  if (a.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "need at least two residuals");
  }
  if (!a.allFinite()) throw Error(ErrorCode::non_finite, "residuals are not finite");
  if ((a.array() < 0.0).any()) {
    throw Error(ErrorCode::invalid_argument, "absolute residuals must be nonnegative");
  }
  if ((a.array() == 0.0).all()) {
    throw Error(ErrorCode::all_zero_residuals,
                "all residuals are zero; the variance profile is not identified");
  }
}

void check_bandwidth(double b) {
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw Error(ErrorCode::invalid_argument, "bandwidth must be positive and finite");
  }
}

// Kernel values by lag distance d = |t - i|, with the d = 0 entry zeroed
// (leave-one-out).
std::vector<double> lag_kernel(Kernel kernel, Eigen::Index n, double b) {
  const double nb = static_cast<double>(n) * b;
  Eigen::Index reach = n - 1;
  if (kernel == Kernel::gaussian) {
    reach = std::min<Eigen::Index>(reach, static_cast<Eigen::Index>(std::ceil(kGaussianCutoff * nb)));
  }
  std::vector<double> k(static_cast<std::size_t>(reach + 1), 0.0);
  for (Eigen::Index d = 1; d <= reach; ++d) {
    k[static_cast<std::size_t>(d)] = kernel_value(kernel, static_cast<double>(d) / nb);
  }
  return k;
}

// Raw leave-one-out smoother; no floor.
Eigen::VectorXd smooth(const Eigen::VectorXd& a, Kernel kernel, double b) {
  const Eigen::Index n = a.size();
  const std::vector<double> k = lag_kernel(kernel, n, b);
  const auto reach = static_cast<Eigen::Index>(k.size()) - 1;
  Eigen::VectorXd out(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    double num = 0.0;
    double den = 0.0;
    const Eigen::Index lo = std::max<Eigen::Index>(0, t - reach);
    const Eigen::Index hi = std::min<Eigen::Index>(n - 1, t + reach);
    for (Eigen::Index i = lo; i <= hi; ++i) {
      const double w = k[static_cast<std::size_t>(std::abs(t - i))];
      num += w * a(i);
      den += w;
    }
    if (!(den > 0.0)) {
      throw Error(ErrorCode::degenerate_row,
                  "kernel weights vanish for observation " + std::to_string(t));
    }
    out(t) = num / den;
  }
  return out;
}

double median(Eigen::VectorXd v) {
  const auto n = static_cast<std::size_t>(v.size());
  std::vector<double> s(v.data(), v.data() + n);
  const auto mid = s.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(s.begin(), mid, s.end());
  if (n % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(s.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

double kernel_value(Kernel kernel, double x) {
  switch (kernel) {
    case Kernel::gaussian:
      return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  }
  return 0.0;
}

Eigen::VectorXd kernel_row(Eigen::Index t, Eigen::Index n, const KernelConfig& cfg) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "kernel_row needs n >= 2");
  if (t < 0 || t >= n) throw Error(ErrorCode::invalid_argument, "row index out of range");
  check_bandwidth(cfg.bandwidth);
  const double nb = static_cast<double>(n) * cfg.bandwidth;
  Eigen::VectorXd row(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    row(i) = i == t ? 0.0 : kernel_value(cfg.kernel, static_cast<double>(t - i) / nb);
  }
  const double total = row.sum();
  if (!(total > 0.0)) {
    throw Error(ErrorCode::degenerate_row,
                "kernel weights vanish for observation " + std::to_string(t));
  }
  return row / total;
}

GHat estimate_g_hat(const Eigen::VectorXd& abs_residuals, const KernelConfig& cfg) {
  check_abs_residuals(abs_residuals);
  check_bandwidth(cfg.bandwidth);
  GHat g;
  g.values = smooth(abs_residuals, cfg.kernel, cfg.bandwidth);
  g.bandwidth_used = cfg.bandwidth;
  g.floor_applied.assign(static_cast<std::size_t>(abs_residuals.size()), false);

  double floor = kGFloorFraction * median(abs_residuals);
  if (!(floor > 0.0)) {
    // More than half the residuals are exactly zero; fall back to the mean.
    floor = kGFloorFraction * abs_residuals.mean();
  }
  for (Eigen::Index t = 0; t < g.values.size(); ++t) {
    if (g.values(t) < floor) {
      g.values(t) = floor;
      g.floor_applied[static_cast<std::size_t>(t)] = true;
    }
  }
  return g;
}

double cv_score(const Eigen::VectorXd& abs_residuals, double bandwidth, Kernel kernel) {
  check_abs_residuals(abs_residuals);
  check_bandwidth(bandwidth);
  const Eigen::VectorXd g = smooth(abs_residuals, kernel, bandwidth);
  return (abs_residuals - g).squaredNorm() / static_cast<double>(abs_residuals.size());
}

std::vector<double> BandwidthGrid::default_c_grid() {
  constexpr int kPoints = 20;
  const double lo = std::log(0.1);
  const double hi = std::log(3.0);
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    grid[static_cast<std::size_t>(i)] = std::exp(lo + (hi - lo) * i / (kPoints - 1));
  }
  return grid;
}

double BandwidthGrid::rate(Eigen::Index n) const {
  return std::pow(static_cast<double>(n), -1.0 / (5.0 + 2.0 * delta4));
}

BandwidthChoice select_bandwidth(const Eigen::VectorXd& abs_residuals,
                                 const BandwidthGrid& grid) {
  if (grid.c_grid.empty()) throw Error(ErrorCode::invalid_argument, "empty bandwidth grid");
  std::vector<double> cs = grid.c_grid;
  std::sort(cs.begin(), cs.end());
  const double rate = grid.rate(abs_residuals.size());
  BandwidthChoice best;
  bool have = false;
  for (double c : cs) {
    const double b = c * rate;
    const double score = cv_score(abs_residuals, b, grid.kernel);
    if (!have || score < best.cv) {
      best = {b, c, score};
      have = true;
    }
  }
  return best;
}

}  // namespace arlad
