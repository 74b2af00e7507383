#pragma once

#include <stdexcept>
#include <string>

namespace agc {

enum class ErrorKind {
  // configuration / usage
  bad_config,
  bad_argument,
  // data / file problems
  unreadable,
  malformed_row,
  non_monotonic_timestamp,
  gap_too_large,
  value_out_of_range,
  no_overlap,
  too_short,
  length_mismatch,
  // numeric / model problems
  non_positive_tau,
  non_integer_ratio,
  lead_out_of_range,
  degenerate_range,
  lag_too_large,
  segment_too_long,
  cutoff_above_nyquist,
  zero_reference_std,
  singular_regression,
  history_too_short,
  degenerate_slope_range,
};

const char* error_kind_name(ErrorKind kind);

/// Process exit code for an error: 2 usage, 3 data, 4 numeric/model.
int exit_code_for(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, long line = -1)
      : std::runtime_error(std::move(message)), kind_(kind), line_(line) {}

  ErrorKind kind() const { return kind_; }
  /// 1-based input line number when the error came from a file, else -1.
  long line() const { return line_; }

 private:
  ErrorKind kind_;
  long line_;
};

}  // namespace agc
