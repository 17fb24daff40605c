#pragma once

#include "arlad/ar_model.hpp"

#include <iosfwd>
#include <string>

namespace arlad {

/// Reads a single numeric column, with an optional header on the first
/// non-empty line. Throws Error(parse_error) with the 1-based line number for
/// anything else, including NaN and infinities.
SeriesSample read_series_csv(std::istream& in);
SeriesSample read_series_csv_file(const std::string& path);

/// Entry point of the arlad tool. Returns the process exit code: 0 on
/// success, 1 on a runtime error, 2 on a usage error. Failures are reported
/// as a JSON error object on err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace arlad
