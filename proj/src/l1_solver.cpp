#include "arlad/l1_solver.hpp"

#include "arlad/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace arlad {

std::string_view to_string(SolverStatus status) noexcept {
  switch (status) {
    case SolverStatus::optimal: return "optimal";
    case SolverStatus::degenerate_tie: return "degenerate_tie";
    case SolverStatus::max_iter: return "max_iter";
  }
  return "unknown";
}

namespace {

void validate(const L1Problem& problem) {
  const Eigen::Index n = problem.rows();
  const Eigen::Index k = problem.cols();
  if (k < 1) throw Error(ErrorCode::invalid_argument, "design has no columns");
  if (problem.response.size() != n || problem.inv_weights.size() != n) {
    throw Error(ErrorCode::invalid_argument,
                "response and inv_weights must have one entry per design row");
  }
  if (problem.multipliers && problem.multipliers->size() != n) {
    throw Error(ErrorCode::invalid_argument,
                "multipliers must have one entry per design row");
  }
  if (n < k) {
    throw Error(ErrorCode::invalid_argument,
                "need at least as many rows as parameters (n=" +
                    std::to_string(n) + ", k=" + std::to_string(k) + ")");
  }
  if (!problem.design.allFinite() || !problem.response.allFinite() ||
      !problem.inv_weights.allFinite() ||
      (problem.multipliers && !problem.multipliers->allFinite())) {
    throw Error(ErrorCode::non_finite, "L1 problem contains NaN or Inf");
  }
  if ((problem.inv_weights.array() <= 0.0).any()) {
    throw Error(ErrorCode::invalid_argument,
                "inv_weights must be strictly positive");
  }
  if (problem.multipliers && (problem.multipliers->array() < 0.0).any()) {
    throw Error(ErrorCode::invalid_argument, "multipliers must be nonnegative");
  }
}

Eigen::VectorXd effective_costs(const L1Problem& problem) {
  Eigen::VectorXd c = problem.inv_weights;
  if (problem.multipliers) c.array() *= problem.multipliers->array();
  return c;
}

// Greedily takes rows in the given order while they stay linearly
// independent (modified Gram-Schmidt with one reorthogonalization pass).
std::vector<int> independent_rows(const Eigen::MatrixXd& X,
                                  const std::vector<int>& order) {
  const Eigen::Index k = X.cols();
  std::vector<int> picked;
  std::vector<Eigen::VectorXd> q;
  for (int i : order) {
    Eigen::VectorXd v = X.row(i).transpose();
    const double norm0 = v.norm();
    if (norm0 == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& e : q) v -= e.dot(v) * e;
    }
    const double norm1 = v.norm();
    if (norm1 > 1e-9 * norm0) {
      q.push_back(v / norm1);
      picked.push_back(i);
      if (static_cast<Eigen::Index>(picked.size()) == k) break;
    }
  }
  return picked;
}

// Rows sorted by increasing |residual| of a (weighted) least-squares fit;
// a cheap way to start the simplex near the optimum.
std::vector<int> starting_basis(const Eigen::MatrixXd& X,
                                const Eigen::VectorXd& y,
                                const Eigen::VectorXd& c) {
  const Eigen::Index n = X.rows();
  const Eigen::Index k = X.cols();
  Eigen::VectorXd theta;
  if ((c.array() > 0.0).count() >= k) {
    const Eigen::VectorXd root = c.cwiseSqrt();
    const Eigen::MatrixXd Xw = root.asDiagonal() * X;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xw);
    if (qr.rank() == k) theta = qr.solve(root.cwiseProduct(y));
  }
  if (theta.size() == 0) theta = X.colPivHouseholderQr().solve(y);

  const Eigen::VectorXd r = (y - X * theta).cwiseAbs();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return r(a) < r(b); });
  return independent_rows(X, order);
}

struct Breakpoint {
  double step;
  int row;
  double slope_jump;
};

// Simplex over the vertices of the piecewise-linear objective. A vertex is
// identified by k "basic" rows fitted exactly; every other row carries a
// sign sigma that agrees with its residual (and is free when the residual
// is zero, which is how degenerate vertices are represented).
class VertexSimplex {
 public:
  enum class Result { optimal, tie, budget };

  VertexSimplex(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                const Eigen::VectorXd& c, const SolverOptions& options)
      : X_(X),
        y_(y),
        c_(c),
        Xabs_(X.cwiseAbs()),
        n_(X.rows()),
        k_(X.cols()),
        tol_rc_(options.tol_reduced_cost),
        in_basis_(static_cast<std::size_t>(n_), 0),
        sigma_(static_cast<std::size_t>(n_), 1),
        A_(n_, k_),
        r_(n_) {}

  bool load_basis(const std::vector<int>& basis) {
    if (static_cast<Eigen::Index>(basis.size()) != k_) return false;
    std::vector<char> seen(static_cast<std::size_t>(n_), 0);
    for (int i : basis) {
      if (i < 0 || i >= n_ || seen[static_cast<std::size_t>(i)]) return false;
      seen[static_cast<std::size_t>(i)] = 1;
    }
    Eigen::MatrixXd XB(k_, k_);
    for (Eigen::Index j = 0; j < k_; ++j) XB.row(j) = X_.row(basis[j]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(XB);
    if (lu.rank() < k_ || lu.rcond() < 1e-13) return false;
    basis_ = basis;
    in_basis_ = std::move(seen);
    return true;
  }

  Result run(std::size_t budget, bool bland_only) {
    std::vector<Breakpoint> breakpoints;
    breakpoints.reserve(static_cast<std::size_t>(n_));
    bool bland = bland_only;
    std::size_t used = 0;

    for (;;) {
      refresh();

      // Reduced costs of leaving basic row j in direction eps * d_j, where
      // d_j is column j of XB^{-1}: c_j - eps * sum_{i not in B} c_i s_i a_ij.
      Eigen::VectorXd cs = Eigen::VectorXd::Zero(n_);
      Eigen::VectorXd cn = Eigen::VectorXd::Zero(n_);
      for (Eigen::Index i = 0; i < n_; ++i) {
        if (in_basis_[static_cast<std::size_t>(i)]) continue;
        cs(i) = c_(i) * sigma_[static_cast<std::size_t>(i)];
        cn(i) = c_(i);
      }
      const Eigen::VectorXd g = A_.transpose() * cs;
      const Eigen::VectorXd scale = A_.cwiseAbs().transpose() * cn;

      int enter_j = -1;
      int enter_eps = 0;
      double enter_rc = 0.0;
      double enter_tol = 0.0;
      bool tie = false;
      for (Eigen::Index j = 0; j < k_; ++j) {
        const double cb = c_(basis_[j]);
        const double tol = tol_rc_ * (cb + scale(j)) + 1e-300;
        for (int eps : {1, -1}) {
          const double rc = cb - eps * g(j);
          if (rc < -tol) {
            bool take = enter_j < 0;
            if (!take) {
              take = bland ? basis_[j] < basis_[enter_j] : rc < enter_rc;
            }
            if (take) {
              enter_j = static_cast<int>(j);
              enter_eps = eps;
              enter_rc = rc;
              enter_tol = tol;
            }
          } else if (rc <= tol) {
            tie = true;
          }
        }
      }
      if (enter_j < 0) return tie ? Result::tie : Result::optimal;
      if (used >= budget) return Result::budget;

      // Line search along the edge: the objective is convex piecewise linear
      // in the step s, with a kink wherever a nonbasic residual crosses zero.
      // Walk the kinks in order until the slope turns nonnegative.
      const Eigen::VectorXd dabs = Binv_.col(enter_j).cwiseAbs();
      const Eigen::VectorXd magnitude = Xabs_ * dabs;
      breakpoints.clear();
      for (Eigen::Index i = 0; i < n_; ++i) {
        if (in_basis_[static_cast<std::size_t>(i)]) continue;
        const double a = enter_eps * A_(i, enter_j);
        const double sa = sigma_[static_cast<std::size_t>(i)] * a;
        if (sa <= 1e-13 * magnitude(i)) continue;
        const double s = std::max(0.0, r_(i) / a);
        breakpoints.push_back({s, static_cast<int>(i), 2.0 * c_(i) * std::abs(a)});
      }
      std::sort(breakpoints.begin(), breakpoints.end(),
                [](const Breakpoint& a, const Breakpoint& b) {
                  return a.step < b.step || (a.step == b.step && a.row < b.row);
                });

      std::size_t chosen = breakpoints.size();
      double slope = enter_rc;
      for (std::size_t b = 0; b < breakpoints.size(); ++b) {
        slope += breakpoints[b].slope_jump;
        if (slope >= -enter_tol) {
          chosen = b;
          break;
        }
      }
      if (chosen == breakpoints.size()) {
        // Only reachable through rounding: the slope at infinity is
        // c_j + sum c_i |a_i| >= 0. Treat the edge as flat.
        if (breakpoints.empty()) return Result::tie;
        chosen = breakpoints.size() - 1;
      }
      for (std::size_t b = 0; b < chosen; ++b) {
        auto& s = sigma_[static_cast<std::size_t>(breakpoints[b].row)];
        s = static_cast<signed char>(-s);
      }

      const int entering = breakpoints[chosen].row;
      const int leaving = basis_[enter_j];
      sigma_[static_cast<std::size_t>(leaving)] =
          static_cast<signed char>(-enter_eps);
      in_basis_[static_cast<std::size_t>(leaving)] = 0;
      in_basis_[static_cast<std::size_t>(entering)] = 1;
      basis_[enter_j] = entering;

      // Bland's rule after a step of length zero guards against cycling.
      bland = bland_only || breakpoints[chosen].step <= 0.0;
      ++used;
      ++pivots_;
    }
  }

  void finalize() { refresh(); }

  const Eigen::VectorXd& theta() const { return theta_; }
  const std::vector<int>& basis() const { return basis_; }
  std::size_t pivots() const { return pivots_; }

 private:
  void refresh() {
    Eigen::MatrixXd XB(k_, k_);
    Eigen::VectorXd yB(k_);
    for (Eigen::Index j = 0; j < k_; ++j) {
      XB.row(j) = X_.row(basis_[j]);
      yB(j) = y_(basis_[j]);
    }
    Binv_ = Eigen::PartialPivLU<Eigen::MatrixXd>(XB).inverse();
    theta_ = Binv_ * yB;
    A_.noalias() = X_ * Binv_;
    r_ = y_ - X_ * theta_;
    const Eigen::VectorXd zero_tol =
        1e-10 * (y_.cwiseAbs() + Xabs_ * theta_.cwiseAbs());
    for (Eigen::Index i = 0; i < n_; ++i) {
      const auto si = static_cast<std::size_t>(i);
      if (in_basis_[si] || std::abs(r_(i)) <= zero_tol(i)) {
        r_(i) = 0.0;
        continue;
      }
      sigma_[si] = r_(i) > 0.0 ? 1 : -1;
    }
  }

  const Eigen::MatrixXd& X_;
  const Eigen::VectorXd& y_;
  const Eigen::VectorXd& c_;
  const Eigen::MatrixXd Xabs_;
  const Eigen::Index n_;
  const Eigen::Index k_;
  const double tol_rc_;

  std::vector<int> basis_;
  std::vector<char> in_basis_;
  std::vector<signed char> sigma_;
  Eigen::MatrixXd Binv_;
  Eigen::VectorXd theta_;
  Eigen::MatrixXd A_;
  Eigen::VectorXd r_;
  std::size_t pivots_ = 0;
};

// Iteratively reweighted least squares on a Huberized objective with a
// shrinking smoothing parameter. Only used to restart the simplex when the
// pivot budget runs out.
Eigen::VectorXd smoothed_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                             const Eigen::VectorXd& c, double tol_obj) {
  const Eigen::Index k = X.cols();
  Eigen::VectorXd theta = X.colPivHouseholderQr().solve(y);
  double gamma = std::max((y - X * theta).cwiseAbs().maxCoeff(), 1e-12);
  const double floor = 1e-12 * std::max(1.0, y.cwiseAbs().maxCoeff());
  while (gamma > floor) {
    for (int inner = 0; inner < 20; ++inner) {
      const Eigen::VectorXd r = y - X * theta;
      const Eigen::VectorXd w =
          c.array() / r.cwiseAbs().array().max(gamma) + 1e-300;
      const Eigen::MatrixXd H =
          X.transpose() * w.asDiagonal() * X +
          1e-14 * Eigen::MatrixXd::Identity(k, k);
      const Eigen::VectorXd next =
          H.ldlt().solve(X.transpose() * w.cwiseProduct(y));
      const double change = (next - theta).lpNorm<Eigen::Infinity>();
      theta = next;
      if (change <= tol_obj * std::max(1.0, theta.lpNorm<Eigen::Infinity>()))
        break;
    }
    gamma *= 0.3;
  }
  return theta;
}

}  // namespace

void require_full_column_rank(const Eigen::MatrixXd& design, double tol) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(tol);
  if (qr.rank() < design.cols()) {
    throw Error(ErrorCode::rank_deficient,
                "design matrix has rank " + std::to_string(qr.rank()) +
                    " < " + std::to_string(design.cols()) + " columns");
  }
}

double l1_objective(const L1Problem& problem, const Eigen::VectorXd& theta) {
  const Eigen::VectorXd r = problem.response - problem.design * theta;
  return effective_costs(problem).dot(r.cwiseAbs());
}

L1Solution solve_weighted_lad(const L1Problem& problem,
                              const SolverOptions& options) {
  validate(problem);
  if (options.check_rank) require_full_column_rank(problem.design, options.rank_tol);

  const Eigen::MatrixXd& X = problem.design;
  const Eigen::VectorXd& y = problem.response;
  const Eigen::VectorXd c = effective_costs(problem);
  const auto n = static_cast<std::size_t>(X.rows());
  const std::size_t budget = options.max_pivots > 0 ? options.max_pivots : 50 * n;

  VertexSimplex simplex(X, y, c, options);
  if (!simplex.load_basis(options.initial_basis) &&
      !simplex.load_basis(starting_basis(X, y, c))) {
    throw Error(ErrorCode::rank_deficient,
                "could not find an invertible starting basis");
  }

  auto result = simplex.run(budget, false);
  std::size_t pivots = simplex.pivots();
  const VertexSimplex* final_state = &simplex;

  VertexSimplex polish(X, y, c, options);
  if (result == VertexSimplex::Result::budget) {
    // Restart from the vertex nearest a smoothed solution, Bland's rule only.
    const Eigen::VectorXd guess = smoothed_fit(X, y, c, options.tol_obj);
    const Eigen::VectorXd r = (y - X * guess).cwiseAbs();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return r(a) < r(b); });
    if (polish.load_basis(independent_rows(X, order))) {
      result = polish.run(budget, true);
      pivots += polish.pivots();
      final_state = &polish;
    }
  }

  L1Solution solution;
  solution.theta = final_state->theta();
  solution.basis = final_state->basis();
  solution.iterations = pivots;
  solution.objective = c.dot((y - X * solution.theta).cwiseAbs());
  switch (result) {
    case VertexSimplex::Result::optimal: solution.status = SolverStatus::optimal; break;
    case VertexSimplex::Result::tie: solution.status = SolverStatus::degenerate_tie; break;
    case VertexSimplex::Result::budget: solution.status = SolverStatus::max_iter; break;
  }
  return solution;
}

double weighted_median(std::span<const double> values,
                       std::span<const double> weights) {
  if (values.empty()) throw Error(ErrorCode::invalid_argument, "empty input");
  if (values.size() != weights.size()) {
    throw Error(ErrorCode::invalid_argument,
                "values and weights must have equal length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || !std::isfinite(weights[i])) {
      throw Error(ErrorCode::non_finite, "weighted_median input is not finite");
    }
    if (weights[i] <= 0.0) {
      throw Error(ErrorCode::invalid_argument, "weights must be positive");
    }
    total += weights[i];
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  const double half = 0.5 * total;
  double cumulative = 0.0;
  for (std::size_t i : order) {
    cumulative += weights[i];
    if (cumulative >= half) return values[i];
  }
  return values[order.back()];
}

}  // namespace arlad
