#pragma once

#include <Eigen/Dense>

#include <vector>

namespace arlad {

enum class Kernel { gaussian };

/// Kernel value K(x); every kernel integrates to one over the real line.
double kernel_value(Kernel kernel, double x);

struct KernelConfig {
  Kernel kernel = Kernel::gaussian;
  double bandwidth = 0.1;  // b, on the t/n scale
};

/// Leave-one-out smoothing weights k_t1..k_tn for observation t (0-based):
/// K((t-i)/(n b)) normalized to sum to one, with k_tt = 0.
Eigen::VectorXd kernel_row(Eigen::Index t, Eigen::Index n, const KernelConfig& cfg);

struct GHat {
  Eigen::VectorXd values;
  double bandwidth_used = 0.0;
  std::vector<bool> floor_applied;
};

/// Relative floor for g-hat: entries are kept >= kGFloorFraction * median|e|.
inline constexpr double kGFloorFraction = 1e-4;

/// Kernel estimate of the variance profile from absolute LADE residuals,
/// g_t = sum_i k_ti |e_i|, floored away from zero because it ends up as a
/// divisor in the adaptive objective. Throws Error(all_zero_residuals) when
/// every residual is zero (the scale is not identified).
GHat estimate_g_hat(const Eigen::VectorXd& abs_residuals, const KernelConfig& cfg);

/// Leave-one-out cross-validation criterion (1/n) sum (|e_t| - g_t)^2 for
/// bandwidth b (gaussian kernel, no floor).
double cv_score(const Eigen::VectorXd& abs_residuals, double bandwidth,
                Kernel kernel = Kernel::gaussian);

/// Bandwidths searched by cross-validation: b = C * n^(-1 / (5 + 2 delta4))
/// for C on c_grid.
struct BandwidthGrid {
  double delta4 = 0.25;
  std::vector<double> c_grid = default_c_grid();
  Kernel kernel = Kernel::gaussian;

  /// 20 log-spaced points on [0.1, 3].
  static std::vector<double> default_c_grid();
  double rate(Eigen::Index n) const;
};

struct BandwidthChoice {
  double bandwidth = 0.0;
  double c = 0.0;
  double cv = 0.0;
};

/// Grid search for the CV-minimizing bandwidth; ties go to the smallest C.
BandwidthChoice select_bandwidth(const Eigen::VectorXd& abs_residuals,
                                 const BandwidthGrid& grid = {});

}  // namespace arlad
