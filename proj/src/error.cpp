#include "agc/error.hpp"

namespace agc {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::bad_config: return "BadConfig";
    case ErrorKind::bad_argument: return "BadArgument";
    case ErrorKind::unreadable: return "Unreadable";
    case ErrorKind::malformed_row: return "MalformedRow";
    case ErrorKind::non_monotonic_timestamp: return "NonMonotonicTimestamp";
    case ErrorKind::gap_too_large: return "GapTooLarge";
    case ErrorKind::value_out_of_range: return "ValueOutOfPhysicalRange";
    case ErrorKind::no_overlap: return "NoOverlap";
    case ErrorKind::too_short: return "TooShort";
    case ErrorKind::length_mismatch: return "LengthMismatch";
    case ErrorKind::non_positive_tau: return "NonPositiveTau";
    case ErrorKind::non_integer_ratio: return "NonIntegerRatio";
    case ErrorKind::lead_out_of_range: return "LeadOutOfRange";
    case ErrorKind::degenerate_range: return "DegenerateRange";
    case ErrorKind::lag_too_large: return "LagTooLarge";
    case ErrorKind::segment_too_long: return "SegmentTooLong";
    case ErrorKind::cutoff_above_nyquist: return "CutoffAboveNyquist";
    case ErrorKind::zero_reference_std: return "ZeroReferenceStd";
    case ErrorKind::singular_regression: return "SingularRegression";
    case ErrorKind::history_too_short: return "HistoryTooShort";
    case ErrorKind::degenerate_slope_range: return "DegenerateSlopeRange";
  }
  return "Unknown";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::bad_config:
    case ErrorKind::bad_argument:
      return 2;
    case ErrorKind::unreadable:
    case ErrorKind::malformed_row:
    case ErrorKind::non_monotonic_timestamp:
    case ErrorKind::gap_too_large:
    case ErrorKind::value_out_of_range:
    case ErrorKind::no_overlap:
    case ErrorKind::too_short:
    case ErrorKind::length_mismatch:
      return 3;
    default:
      return 4;
  }
}

}  // namespace agc
