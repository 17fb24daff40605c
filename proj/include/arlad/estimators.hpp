#pragma once

#include "arlad/ar_model.hpp"
#include "arlad/l1_solver.hpp"
#include "arlad/weights.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace arlad {

/// Unweighted LADE.
struct Lade {};
/// Weighted LADE with user weights w_t; the objective divides by w_t.
struct WeightedLade {
  Eigen::VectorXd w;
};
/// Weighted LADE with w_t = true g_t (simulation only).
struct AladeInfeasible {};
/// Two-stage adaptive LADE: LADE residuals -> kernel g-hat with a CV
/// bandwidth -> weighted LADE with w_t = g-hat_t.
struct AladeFeasible {
  BandwidthGrid grid;
};
/// Ordinary least squares.
struct Lse {};
/// Least squares with rows weighted by g_t^-2 (simulation only).
struct AlseInfeasible {};

using EstimatorKind =
    std::variant<Lade, WeightedLade, AladeInfeasible, AladeFeasible, Lse, AlseInfeasible>;

std::string_view name(const EstimatorKind& kind);
/// Parses lade, alade (= alade_feasible), alade_feasible, alade_infeasible,
/// lse, alse_infeasible. weighted_lade needs weights and is not parseable.
EstimatorKind parse_estimator(std::string_view text);
bool is_lad(const EstimatorKind& kind);

struct FitOptions {
  bool intercept = true;
  SolverOptions solver;
};

struct FitResult {
  EstimatorKind kind;
  int p = 0;
  bool intercept = true;
  Eigen::VectorXd theta;
  /// eps_t(theta); rows interpolated by the L1 vertex are exactly zero.
  Eigen::VectorXd residuals;
  /// The w_t dividing each absolute residual (all ones for lade/lse).
  Eigen::VectorXd weights_used;
  std::optional<double> bandwidth;
  std::optional<double> bandwidth_c;
  SolverStatus solver_status = SolverStatus::optimal;
  std::vector<int> basis;
};

/// Fits AR(p) with the given estimator. Needs n > p + 1; infeasible kinds
/// need sample.true_g (Error(missing_true_g) otherwise).
FitResult fit(const SeriesSample& sample, int p, const EstimatorKind& kind,
              const FitOptions& options = {});

/// Refits with random-weighting multipliers w*_t, reusing the weight series
/// of the base fit (g-hat is not re-estimated for the feasible ALADE).
FitResult fit_bootstrap(const SeriesSample& sample, const FitResult& base,
                        const Eigen::VectorXd& rw_weights,
                        const FitOptions& options = {});

/// Repeated multiplier refits of one base fit. Holds the design so each
/// refit only swaps multipliers and warm-starts from the base vertex.
class BootstrapRefitter {
 public:
  BootstrapRefitter(const SeriesSample& sample, const FitResult& base,
                    const FitOptions& options = {});

  /// theta-star and solver status for one multiplier draw.
  struct Refit {
    Eigen::VectorXd theta;
    SolverStatus status = SolverStatus::optimal;
    std::vector<int> basis;
  };
  Refit refit(const Eigen::VectorXd& rw_weights) const;

  /// eps_t(theta-star), with interpolated rows set to exactly zero.
  Eigen::VectorXd residuals(const Refit& r) const;

  const Design& design() const { return design_; }

 private:
  Design design_;
  Eigen::VectorXd inv_weights_;
  bool lad_;
  SolverOptions solver_;
};

}  // namespace arlad
