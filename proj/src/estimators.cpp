#include "arlad/estimators.hpp"

#include "arlad/error.hpp"

#include <string>

namespace arlad {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const Eigen::VectorXd& require_true_g(const SeriesSample& sample) {
  if (!sample.true_g) {
    throw Error(ErrorCode::missing_true_g,
                "infeasible estimators need the true variance profile");
  }
  const Eigen::VectorXd& g = *sample.true_g;
  if (g.size() != sample.size()) {
    throw Error(ErrorCode::invalid_argument, "true_g length differs from the series");
  }
  if (!g.allFinite() || (g.array() <= 0.0).any()) {
    throw Error(ErrorCode::invalid_argument, "true_g must be positive and finite");
  }
  return g;
}

void check_weight_series(const Eigen::VectorXd& w, Eigen::Index n) {
  if (w.size() != n) {
    throw Error(ErrorCode::invalid_argument, "weight series length differs from the series");
  }
  if (!w.allFinite()) throw Error(ErrorCode::non_finite, "weight series is not finite");
  if ((w.array() <= 0.0).any()) {
    throw Error(ErrorCode::invalid_argument, "weights must be strictly positive");
  }
}

struct LadOutcome {
  Eigen::VectorXd theta;
  Eigen::VectorXd residuals;
  SolverStatus status;
  std::vector<int> basis;
};

LadOutcome solve_lad(const Design& d, const Eigen::VectorXd& w,
                     const SolverOptions& solver) {
  L1Problem problem{d.X, d.y, w.cwiseInverse(), std::nullopt};
  const L1Solution sol = solve_weighted_lad(problem, solver);
  LadOutcome out{sol.theta, d.y - d.X * sol.theta, sol.status, sol.basis};
  for (int i : sol.basis) out.residuals(i) = 0.0;
  return out;
}

// argmin sum row_weight_t * (y_t - x_t' theta)^2 through QR of the scaled
// design.
Eigen::VectorXd weighted_least_squares(const Design& d, const Eigen::VectorXd& row_weight) {
  const Eigen::VectorXd root = row_weight.cwiseSqrt();
  const Eigen::MatrixXd Xw = root.asDiagonal() * d.X;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xw);
  qr.setThreshold(1e-10);
  if (qr.rank() < d.X.cols()) {
    throw Error(ErrorCode::rank_deficient, "least-squares design is rank deficient");
  }
  return qr.solve(root.cwiseProduct(d.y));
}

}  // namespace

std::string_view name(const EstimatorKind& kind) {
  return std::visit(overloaded{
                        [](const Lade&) { return std::string_view("lade"); },
                        [](const WeightedLade&) { return std::string_view("weighted_lade"); },
                        [](const AladeInfeasible&) { return std::string_view("alade_infeasible"); },
                        [](const AladeFeasible&) { return std::string_view("alade_feasible"); },
                        [](const Lse&) { return std::string_view("lse"); },
                        [](const AlseInfeasible&) { return std::string_view("alse_infeasible"); },
                    },
                    kind);
}

EstimatorKind parse_estimator(std::string_view text) {
  if (text == "lade") return Lade{};
  if (text == "alade" || text == "alade_feasible") return AladeFeasible{};
  if (text == "alade_infeasible") return AladeInfeasible{};
  if (text == "lse") return Lse{};
  if (text == "alse_infeasible") return AlseInfeasible{};
  throw Error(ErrorCode::invalid_argument, "unknown estimator '" + std::string(text) + "'");
}

bool is_lad(const EstimatorKind& kind) {
  return !std::holds_alternative<Lse>(kind) && !std::holds_alternative<AlseInfeasible>(kind);
}

FitResult fit(const SeriesSample& sample, int p, const EstimatorKind& kind,
              const FitOptions& options) {
  const Eigen::Index n = sample.size();
  if (p < 0) throw Error(ErrorCode::invalid_argument, "AR order must be >= 0");
  if (n <= p + 1) {
    throw Error(ErrorCode::invalid_argument,
                "n too small: need n > p + 1 (n=" + std::to_string(n) +
                    ", p=" + std::to_string(p) + ")");
  }
  const Design d = build_design(sample, p, options.intercept);

  FitResult result;
  result.kind = kind;
  result.p = p;
  result.intercept = options.intercept;

  auto finish_lad = [&](const Eigen::VectorXd& w) {
    LadOutcome lad = solve_lad(d, w, options.solver);
    result.theta = std::move(lad.theta);
    result.residuals = std::move(lad.residuals);
    result.solver_status = lad.status;
    result.basis = std::move(lad.basis);
    result.weights_used = w;
  };
  auto finish_ls = [&](const Eigen::VectorXd& w) {
    result.theta = weighted_least_squares(d, w.array().square().inverse().matrix());
    result.residuals = d.y - d.X * result.theta;
    result.weights_used = w;
  };

  std::visit(overloaded{
                 [&](const Lade&) { finish_lad(Eigen::VectorXd::Ones(n)); },
                 [&](const WeightedLade& k) {
                   check_weight_series(k.w, n);
                   finish_lad(k.w);
                 },
                 [&](const AladeInfeasible&) { finish_lad(require_true_g(sample)); },
                 [&](const AladeFeasible& k) {
                   const LadOutcome stage1 = solve_lad(d, Eigen::VectorXd::Ones(n), options.solver);
                   const Eigen::VectorXd abs_res = stage1.residuals.cwiseAbs();
                   // An exact fit minimizes every weighted objective.
                   if ((abs_res.array() == 0.0).all()) {
                     finish_lad(Eigen::VectorXd::Ones(n));
                     return;
                   }
                   const BandwidthChoice choice = select_bandwidth(abs_res, k.grid);
                   const GHat g = estimate_g_hat(abs_res, {k.grid.kernel, choice.bandwidth});
                   finish_lad(g.values);
                   result.bandwidth = choice.bandwidth;
                   result.bandwidth_c = choice.c;
                 },
                 [&](const Lse&) { finish_ls(Eigen::VectorXd::Ones(n)); },
                 [&](const AlseInfeasible&) { finish_ls(require_true_g(sample)); },
             },
             kind);
  return result;
}

BootstrapRefitter::BootstrapRefitter(const SeriesSample& sample, const FitResult& base,
                                     const FitOptions& options)
    : design_(build_design(sample, base.p, base.intercept)),
      inv_weights_(base.weights_used.cwiseInverse()),
      lad_(is_lad(base.kind)),
      solver_(options.solver) {
  if (base.weights_used.size() != design_.y.size()) {
    throw Error(ErrorCode::invalid_argument, "base fit does not belong to this sample");
  }
  solver_.initial_basis = base.basis;
  solver_.check_rank = false;
}

BootstrapRefitter::Refit BootstrapRefitter::refit(const Eigen::VectorXd& rw_weights) const {
  if (rw_weights.size() != design_.y.size()) {
    throw Error(ErrorCode::invalid_argument, "one multiplier per observation required");
  }
  if (!rw_weights.allFinite() || (rw_weights.array() < 0.0).any()) {
    throw Error(ErrorCode::invalid_argument, "multipliers must be finite and nonnegative");
  }
  Refit out;
  if (lad_) {
    L1Problem problem{design_.X, design_.y, inv_weights_, rw_weights};
    const L1Solution sol = solve_weighted_lad(problem, solver_);
    out.theta = sol.theta;
    out.status = sol.status;
    out.basis = sol.basis;
  } else {
    out.theta = weighted_least_squares(
        design_, rw_weights.cwiseProduct(inv_weights_.array().square().matrix()));
  }
  return out;
}

Eigen::VectorXd BootstrapRefitter::residuals(const Refit& r) const {
  Eigen::VectorXd e = design_.y - design_.X * r.theta;
  for (int i : r.basis) e(i) = 0.0;
  return e;
}

FitResult fit_bootstrap(const SeriesSample& sample, const FitResult& base,
                        const Eigen::VectorXd& rw_weights, const FitOptions& options) {
  const BootstrapRefitter refitter(sample, base, options);
  const BootstrapRefitter::Refit r = refitter.refit(rw_weights);
  FitResult result = base;
  result.theta = r.theta;
  result.solver_status = r.status;
  result.residuals = refitter.residuals(r);
  result.basis = r.basis;
  return result;
}

}  // namespace arlad
