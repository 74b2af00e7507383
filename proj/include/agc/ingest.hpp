#pragma once

#include <string>
#include <vector>

#include "agc/core.hpp"

namespace agc::ingest {

/// Longest run of missing samples repaired by zero-order hold; anything
/// longer is a hard error so the caller can split the file deliberately.
constexpr std::size_t kMaxHoldSamples = 30;

/// Text-formatting slack absorbed when clamping Reg-D values to [-1, 1].
constexpr double kClampEps = 1e-6;

struct Gap {
  std::size_t start_index = 0;  // index of the first filled sample
  double start_time = 0.0;      // epoch seconds
  std::size_t length = 0;       // number of filled samples
  std::string policy = "hold";
};

struct GapReport {
  std::vector<Gap> gaps;

  std::size_t total_missing() const {
    std::size_t n = 0;
    for (const auto& g : gaps) n += g.length;
    return n;
  }
};

struct ReadResult {
  UniformSeries series;
  GapReport gaps;
};

/// Reads `timestamp,value` rows (one header line tolerated; timestamps are
/// ISO-8601 or epoch seconds). Values are clamped to [-1, 1] after an
/// eps-tolerance range check; short gaps are filled by zero-order hold.
ReadResult read_regd_csv(const std::string& path, double expected_dt = 2.0);

/// Same shape as read_regd_csv but values are grid frequency in Hz,
/// validated against [55, 65] and not clamped.
ReadResult read_freq_csv(const std::string& path, double expected_dt = 0.1);

/// Reg-D plus lag-filtered frequency on a common 2 s grid.
struct JointSeries {
  UniformSeries regd;
  UniformSeries freq;

  std::size_t size() const { return regd.size(); }
  double dt() const { return regd.dt; }
};

/// Frequency is lag-filtered at its native rate (all information used),
/// then block-averaged onto the Reg-D grid and trimmed to the common span.
JointSeries build_joint(const UniformSeries& regd, const UniformSeries& freq_raw,
                        double tau_seconds);

/// Epoch seconds from either a decimal number or an ISO-8601 timestamp
/// ("YYYY-MM-DD[T ]HH:MM:SS[.frac][Z|+HH:MM]", naive times read as UTC).
double parse_timestamp(const std::string& field, long line);

}  // namespace agc::ingest
