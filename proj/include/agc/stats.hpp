#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "agc/core.hpp"

namespace agc::stats {

double mean_of(std::span<const double> x);
/// Population variance (divide by N).
double variance_of(std::span<const double> x);
double stddev_of(std::span<const double> x);

struct Histogram {
  std::vector<double> bin_edges;  // n_bins + 1, equal width over [min, max]
  std::vector<double> densities;  // probability-density normalization
};

/// Equal-width histogram with sum(density * width) == 1.
Histogram histogram(const UniformSeries& x, std::size_t n_bins);

struct RunningMoments {
  UniformSeries running_mean;
  UniformSeries running_var;  // population convention, var[0] = 0
};

/// Cumulative mean/variance over prefixes (Welford one-pass update).
RunningMoments running_moments(const UniformSeries& x);

struct SettlingReport {
  std::optional<double> settling_time;  // seconds; empty when not settled
  double final_value = 0.0;
  double band = 0.0;  // absolute half-width actually applied
};

/// Time after which `stat` never leaves final_value +- band, where
/// band = max(rel_tol*|final_value|, abs_floor). A 2% band around a final
/// value of zero is degenerate, hence the absolute floor.
SettlingReport settling_time(const UniformSeries& stat, double rel_tol = 0.02,
                             double abs_floor = 0.005);

enum class GroupBy { all, minute_of_hour, hour_of_day, day_of_week, month_of_year };

GroupBy group_by_from_string(const std::string& name);
const char* group_by_name(GroupBy g);

struct PeggingReport {
  int group_key = 0;        // bucket id; 0 for GroupBy::all
  double amount_pct = 0.0;  // pegged samples / total samples * 100
  double max_s = 0.0;       // longest contiguous pegged run, seconds
  double mean_s = 0.0;
  double p95_s = 0.0;
  std::size_t n_samples = 0;
  std::size_t n_pegged = 0;
  std::size_t n_runs = 0;
};

constexpr double kPegTol = 1e-6;

inline bool is_pegged(double v, double peg_tol = kPegTol) {
  return std::abs(v) >= 1.0 - peg_tol;
}

/// Percentage of pegged samples per calendar bucket. Buckets are cyclic
/// (minute of hour, hour of day, ISO day of week, month of year) computed
/// in UTC shifted by utc_offset_min.
std::vector<PeggingReport> pegging_amount(const UniformSeries& x, GroupBy group_by,
                                          double peg_tol = kPegTol,
                                          int utc_offset_min = 0);

/// Run-length statistics of contiguous pegged stretches. A run belongs to
/// the bucket containing its first sample and is never split.
std::vector<PeggingReport> pegging_durations(const UniformSeries& x, GroupBy group_by,
                                             double peg_tol = kPegTol,
                                             int utc_offset_min = 0);

struct PsdEstimate {
  std::vector<double> freqs;  // Hz, 0 .. Nyquist
  std::vector<double> psd;    // one-sided density, signal^2/Hz
  double peak_freq = 0.0;     // argmax over f > 0
  double bandwidth_3db = 0.0; // highest f with psd >= peak * 10^(-0.3)
};

/// Welch estimate: Hann windows, mean-detrended segments, averaged
/// one-sided periodograms. segment_len must be a power of two and
/// <= length(x). Satisfies sum(psd)*df ~ signal variance (Parseval).
PsdEstimate welch_psd(const UniformSeries& x, std::size_t segment_len,
                      double overlap = 0.5);

/// Biased autocorrelation estimate (divide by N); acf[0] = 1.
std::vector<double> acf(const UniformSeries& x, std::size_t max_lag);

/// Partial autocorrelation via Durbin-Levinson on the biased acf; pacf[0]=1.
std::vector<double> pacf(const UniformSeries& x, std::size_t max_lag);

/// Pearson correlation of (a[t], b[t+lag]) over the overlapping window for
/// lag in [-max_lag, max_lag]; result index lag + max_lag.
std::vector<double> cross_correlation(const UniformSeries& a, const UniformSeries& b,
                                      std::size_t max_lag);

}  // namespace agc::stats
