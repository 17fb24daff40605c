#include "arlad/bootstrap.hpp"

#include "arlad/error.hpp"
#include "arlad/parallel.hpp"

#include <string>

namespace arlad {
namespace {

void check_config(const RWConfig& cfg) {
  if (cfg.J < 2) throw Error(ErrorCode::invalid_argument, "bootstrap needs J >= 2");
}

// Pairwise sum of outer products over [lo, hi).
Eigen::MatrixXd pairwise_outer(const std::vector<const Eigen::VectorXd*>& v,
                               const Eigen::VectorXd& c, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(c.size(), c.size());
    for (std::size_t i = lo; i < hi; ++i) {
      const Eigen::VectorXd d = *v[i] - c;
      acc.noalias() += d * d.transpose();
    }
    return acc;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_outer(v, c, lo, mid) + pairwise_outer(v, c, mid, hi);
}

Eigen::VectorXd pairwise_sum(const std::vector<const Eigen::VectorXd*>& v, Eigen::Index dim,
                             std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
    for (std::size_t i = lo; i < hi; ++i) acc += *v[i];
    return acc;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, dim, lo, mid) + pairwise_sum(v, dim, mid, hi);
}

bool usable(SolverStatus s) { return s == SolverStatus::optimal; }

struct ReplicatePair {
  std::optional<Eigen::VectorXd> theta;
  std::optional<Eigen::VectorXd> racf;
};

std::vector<ReplicatePair> run_pairs(const SeriesSample& sample, const FitResult& base,
                                     int M, bool want_racf, const RWConfig& cfg,
                                     const FitOptions& options) {
  check_config(cfg);
  const BootstrapRefitter refitter(sample, base, options);
  const Eigen::Index n = sample.size();
  std::vector<ReplicatePair> out(static_cast<std::size_t>(cfg.J));
  parallel_for(out.size(), cfg.threads, [&](std::size_t i) {
    const Eigen::VectorXd w = rw_weights_for(cfg.seed, static_cast<int>(i), n);
    BootstrapRefitter::Refit r;
    try {
      r = refitter.refit(w);
    } catch (const Error&) {
      return;
    }
    if (!usable(r.status)) return;
    out[i].theta = r.theta;
    if (!want_racf) return;
    try {
      out[i].racf = sign_acf_bootstrap(refitter.residuals(r), w, M).r;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::zero_denominator) throw;
    }
  });
  return out;
}

}  // namespace

Eigen::VectorXd draw_rw_weights(Eigen::Index n, Stream& stream) {
  Eigen::VectorXd w(n);
  for (Eigen::Index t = 0; t < n; ++t) w(t) = stream.exponential();
  return w;
}

Eigen::VectorXd rw_weights_for(std::uint64_t seed, int i, Eigen::Index n) {
  Stream stream(seed, static_cast<std::uint64_t>(i), Purpose::rw_weights);
  return draw_rw_weights(n, stream);
}

BootstrapCov second_moment_about(const Eigen::VectorXd& center,
                                 const std::vector<std::optional<Eigen::VectorXd>>& replicates,
                                 const RWConfig& cfg) {
  std::vector<const Eigen::VectorXd*> kept;
  kept.reserve(replicates.size());
  for (const auto& b : replicates) {
    if (!b) continue;
    if (b->size() != center.size()) {
      throw Error(ErrorCode::invalid_argument, "replicate dimension differs from the center");
    }
    if (b->allFinite()) kept.push_back(&*b);
  }
  BootstrapCov out;
  out.J_effective = static_cast<int>(kept.size());
  out.J_dropped = static_cast<int>(replicates.size() - kept.size());
  if (out.J_effective < 2) {
    throw Error(ErrorCode::too_few_replications,
                "only " + std::to_string(out.J_effective) + " usable bootstrap replicates");
  }
  out.warning = out.J_dropped > cfg.warn_fraction * static_cast<double>(replicates.size());

  const Eigen::VectorXd c =
      cfg.mean_center ? Eigen::VectorXd(pairwise_sum(kept, center.size(), 0, kept.size()) /
                                        static_cast<double>(kept.size()))
                      : center;
  Eigen::MatrixXd m = pairwise_outer(kept, c, 0, kept.size()) / static_cast<double>(kept.size());
  out.matrix = 0.5 * (m + m.transpose());

  if (cfg.keep_draws) {
    Eigen::MatrixXd draws(kept.size(), center.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
      draws.row(static_cast<Eigen::Index>(i)) = kept[i]->transpose();
    }
    out.draws = std::move(draws);
  }
  return out;
}

BootstrapCov rw_covariance(Eigen::Index n, const Eigen::VectorXd& center,
                           const Replicate& replicate, const RWConfig& cfg) {
  check_config(cfg);
  std::vector<std::optional<Eigen::VectorXd>> reps(static_cast<std::size_t>(cfg.J));
  parallel_for(reps.size(), cfg.threads, [&](std::size_t i) {
    reps[i] = replicate(rw_weights_for(cfg.seed, static_cast<int>(i), n));
  });
  return second_moment_about(center, reps, cfg);
}

BootstrapCov rw_covariance_theta(const SeriesSample& sample, const FitResult& base,
                                 const RWConfig& cfg, const FitOptions& options) {
  auto pairs = run_pairs(sample, base, 1, false, cfg, options);
  std::vector<std::optional<Eigen::VectorXd>> reps(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) reps[i] = std::move(pairs[i].theta);
  return second_moment_about(base.theta, reps, cfg);
}

BootstrapCov rw_covariance_theta(const SeriesSample& sample, int p, const EstimatorKind& kind,
                                 const RWConfig& cfg, const FitOptions& options) {
  return rw_covariance_theta(sample, fit(sample, p, kind, options), cfg, options);
}

BootstrapCov rw_covariance_racf(const SeriesSample& sample, const FitResult& base, int M,
                                const RWConfig& cfg, const FitOptions& options) {
  return rw_bootstrap(sample, base, M, cfg, options).racf;
}

BootstrapCov rw_covariance_racf(const SeriesSample& sample, int p, const EstimatorKind& kind,
                                int M, const RWConfig& cfg, const FitOptions& options) {
  return rw_covariance_racf(sample, fit(sample, p, kind, options), M, cfg, options);
}

RWBootstrap rw_bootstrap(const SeriesSample& sample, const FitResult& base, int M,
                         const RWConfig& cfg, const FitOptions& options) {
  RWBootstrap out;
  out.r_hat = sign_acf(base.residuals, M);
  auto pairs = run_pairs(sample, base, M, true, cfg, options);
  std::vector<std::optional<Eigen::VectorXd>> thetas(pairs.size());
  std::vector<std::optional<Eigen::VectorXd>> racfs(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    thetas[i] = std::move(pairs[i].theta);
    racfs[i] = std::move(pairs[i].racf);
  }
  out.theta = second_moment_about(base.theta, thetas, cfg);
  out.racf = second_moment_about(out.r_hat.r, racfs, cfg);
  return out;
}

}  // namespace arlad
