#include "arlad/error.hpp"

namespace arlad {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::non_finite: return "non_finite";
    case ErrorCode::rank_deficient: return "rank_deficient";
    case ErrorCode::not_stationary: return "not_stationary";
    case ErrorCode::missing_true_g: return "missing_true_g";
    case ErrorCode::all_zero_residuals: return "all_zero_residuals";
    case ErrorCode::degenerate_row: return "degenerate_row";
    case ErrorCode::zero_denominator: return "zero_denominator";
    case ErrorCode::singular_constraint_cov: return "singular_constraint_cov";
    case ErrorCode::singular_u: return "singular_u";
    case ErrorCode::too_few_replications: return "too_few_replications";
    case ErrorCode::nonstationary_garch: return "nonstationary_garch";
    case ErrorCode::quadrature_failure: return "quadrature_failure";
    case ErrorCode::domain_error: return "domain_error";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::config_error: return "config_error";
    case ErrorCode::io_error: return "io_error";
  }
  return "unknown";
}

}  // namespace arlad
