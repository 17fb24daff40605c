#pragma once

#include "arlad/ar_model.hpp"
#include "arlad/diagnostics.hpp"
#include "arlad/estimators.hpp"
#include "arlad/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>

namespace arlad {

struct RWConfig {
  int J = 500;
  std::uint64_t seed = 0;
  /// Worker threads for the replications (0 = default_thread_count()).
  unsigned threads = 1;
  /// Center at the bootstrap mean instead of the base estimate.
  bool mean_center = false;
  /// Keep the accepted replicate statistics in BootstrapCov::draws.
  bool keep_draws = false;
  /// Dropped fraction above which BootstrapCov::warning is set.
  double warn_fraction = 0.05;
};

struct BootstrapCov {
  Eigen::MatrixXd matrix;
  int J_effective = 0;
  int J_dropped = 0;
  bool warning = false;
  /// One accepted replicate per row, in replication order.
  std::optional<Eigen::MatrixXd> draws;
};

/// n i.i.d. standard exponential multipliers.
Eigen::VectorXd draw_rw_weights(Eigen::Index n, Stream& stream);

/// Multipliers for replication i of a bootstrap run with this seed.
Eigen::VectorXd rw_weights_for(std::uint64_t seed, int i, Eigen::Index n);

/// (1/J_eff) sum_i (b_i - c)(b_i - c)' over the accepted replicates, with c
/// the center (or the replicate mean when cfg.mean_center). Missing entries
/// are dropped and counted. Throws Error(too_few_replications) if fewer than
/// two remain.
BootstrapCov second_moment_about(const Eigen::VectorXd& center,
                                 const std::vector<std::optional<Eigen::VectorXd>>& replicates,
                                 const RWConfig& cfg);

/// Maps one multiplier draw to a replicate statistic, or nullopt when the
/// replicate is degenerate.
using Replicate = std::function<std::optional<Eigen::VectorXd>(const Eigen::VectorXd&)>;

/// Runs cfg.J replicates with multipliers from rw_weights_for and aggregates
/// them about center.
BootstrapCov rw_covariance(Eigen::Index n, const Eigen::VectorXd& center,
                           const Replicate& replicate, const RWConfig& cfg);

/// Bootstrap covariance of theta-hat. Replicates whose refit is not a unique
/// optimum are dropped.
BootstrapCov rw_covariance_theta(const SeriesSample& sample, const FitResult& base,
                                 const RWConfig& cfg, const FitOptions& options = {});
BootstrapCov rw_covariance_theta(const SeriesSample& sample, int p, const EstimatorKind& kind,
                                 const RWConfig& cfg, const FitOptions& options = {});

/// Bootstrap covariance of the sign ACF at lags 1..M. Each replicate uses the
/// same multipliers for the refit and for the weighted numerator.
BootstrapCov rw_covariance_racf(const SeriesSample& sample, const FitResult& base, int M,
                                const RWConfig& cfg, const FitOptions& options = {});
BootstrapCov rw_covariance_racf(const SeriesSample& sample, int p, const EstimatorKind& kind,
                                int M, const RWConfig& cfg, const FitOptions& options = {});

/// Both covariances from one set of refits (identical to calling the two
/// functions above with the same cfg).
struct RWBootstrap {
  SignACF r_hat;
  BootstrapCov theta;
  BootstrapCov racf;
};
RWBootstrap rw_bootstrap(const SeriesSample& sample, const FitResult& base, int M,
                         const RWConfig& cfg, const FitOptions& options = {});

}  // namespace arlad
