#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace arlad {

/// min over theta of  sum_t m_t * v_t * |y_t - x_t' theta|
/// with v_t = inv_weights (1 / w_t) and m_t = multipliers (bootstrap w*_t).
struct L1Problem {
  Eigen::MatrixXd design;    // n x k
  Eigen::VectorXd response;  // n
  Eigen::VectorXd inv_weights;
  std::optional<Eigen::VectorXd> multipliers;

  Eigen::Index rows() const { return design.rows(); }
  Eigen::Index cols() const { return design.cols(); }
};

enum class SolverStatus { optimal, degenerate_tie, max_iter };

std::string_view to_string(SolverStatus status) noexcept;

struct SolverOptions {
  /// Relative objective tolerance used by the smoothed fallback.
  double tol_obj = 1e-9;
  /// Relative tolerance on reduced costs; a reduced cost within it of zero
  /// marks a flat optimal edge.
  double tol_reduced_cost = 1e-12;
  /// Pivot budget per simplex pass; 0 means 50 * n.
  std::size_t max_pivots = 0;
  /// Warm start: k row indices whose exact fit is the starting vertex.
  /// Ignored when invalid or singular.
  std::vector<int> initial_basis;
  /// Column-pivoted QR rank check of the design (threshold rank_tol).
  bool check_rank = true;
  double rank_tol = 1e-10;
};

struct L1Solution {
  Eigen::VectorXd theta;
  double objective = 0.0;
  std::size_t iterations = 0;
  SolverStatus status = SolverStatus::optimal;
  /// Rows interpolated exactly by theta (the final simplex basis).
  std::vector<int> basis;
};

/// Exact vertex solution of the weighted LAD problem by a Barrodale-Roberts
/// style simplex: each pivot moves along an edge of the current vertex and
/// steps over as many residual sign changes as keep decreasing the objective.
///
/// Throws Error(non_finite) on NaN/Inf input, Error(invalid_argument) on
/// shape or sign violations and Error(rank_deficient) when the design has
/// dependent columns.
L1Solution solve_weighted_lad(const L1Problem& problem,
                              const SolverOptions& options = {});

/// Objective value at theta, including multipliers.
double l1_objective(const L1Problem& problem, const Eigen::VectorXd& theta);

/// Throws Error(rank_deficient) unless the columns of design are independent
/// at relative threshold tol (column-pivoted Householder QR).
void require_full_column_rank(const Eigen::MatrixXd& design, double tol = 1e-10);

/// Minimizer of sum_i weights_i * |values_i - m|; the lower of the two
/// candidates when the minimum is attained on an interval.
double weighted_median(std::span<const double> values,
                       std::span<const double> weights);

}  // namespace arlad
