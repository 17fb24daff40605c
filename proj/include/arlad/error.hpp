#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace arlad {

enum class ErrorCode {
  invalid_argument,
  non_finite,
  rank_deficient,
  not_stationary,
  missing_true_g,
  all_zero_residuals,
  degenerate_row,
  zero_denominator,
  singular_constraint_cov,
  singular_u,
  too_few_replications,
  nonstationary_garch,
  quadrature_failure,
  domain_error,
  parse_error,
  config_error,
  io_error,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (the simulation harness, the CLI) can classify it without parsing
/// the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace arlad
