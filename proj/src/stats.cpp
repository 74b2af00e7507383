#include "agc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>

#include "agc/calendar.hpp"
#include "agc/numeric.hpp"

namespace agc::stats {

double mean_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

double variance_of(std::span<const double> x) {
  if (x.empty()) return 0.0;
  const double m = mean_of(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size());
}

double stddev_of(std::span<const double> x) { return std::sqrt(variance_of(x)); }

Histogram histogram(const UniformSeries& x, std::size_t n_bins) {
  if (n_bins < 2) {
    throw Error(ErrorKind::bad_argument, "histogram: need at least 2 bins");
  }
  if (x.empty()) {
    throw Error(ErrorKind::too_short, "histogram: empty series");
  }
  const auto [lo_it, hi_it] = std::minmax_element(x.values.begin(), x.values.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) {
    throw Error(ErrorKind::degenerate_range, "histogram: all samples equal");
  }
  const double width = (hi - lo) / static_cast<double>(n_bins);

  Histogram h;
  h.bin_edges.resize(n_bins + 1);
  for (std::size_t i = 0; i <= n_bins; ++i) {
    h.bin_edges[i] = lo + width * static_cast<double>(i);
  }
  h.bin_edges.back() = hi;

  std::vector<std::size_t> counts(n_bins, 0);
  for (double v : x.values) {
    auto idx = static_cast<std::size_t>((v - lo) / width);
    if (idx >= n_bins) idx = n_bins - 1;  // v == hi lands in the last bin
    ++counts[idx];
  }
  const double norm = 1.0 / (static_cast<double>(x.size()) * width);
  h.densities.resize(n_bins);
  for (std::size_t i = 0; i < n_bins; ++i) {
    h.densities[i] = static_cast<double>(counts[i]) * norm;
  }
  return h;
}

RunningMoments running_moments(const UniformSeries& x) {
  if (x.empty()) {
    throw Error(ErrorKind::too_short, "running_moments: empty series");
  }
  RunningMoments rm;
  rm.running_mean.dt = rm.running_var.dt = x.dt;
  rm.running_mean.t0 = rm.running_var.t0 = x.t0;
  rm.running_mean.values.resize(x.size());
  rm.running_var.values.resize(x.size());

  double mean = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double n = static_cast<double>(k + 1);
    const double delta = x.values[k] - mean;
    mean += delta / n;
    m2 += delta * (x.values[k] - mean);
    rm.running_mean.values[k] = mean;
    rm.running_var.values[k] = m2 / n;
  }
  return rm;
}

SettlingReport settling_time(const UniformSeries& stat, double rel_tol, double abs_floor) {
  if (stat.size() < 2) {
    throw Error(ErrorKind::too_short, "settling_time: need at least 2 samples");
  }
  SettlingReport rep;
  rep.final_value = stat.values.back();
  rep.band = std::max(rel_tol * std::abs(rep.final_value), abs_floor);

  // Last index outside the band; everything after it is settled.
  std::size_t first_settled = 0;
  for (std::size_t k = stat.size(); k-- > 0;) {
    if (std::abs(stat.values[k] - rep.final_value) > rep.band) {
      first_settled = k + 1;
      break;
    }
  }
  if (first_settled == stat.size() - 1) {
    rep.settling_time = std::nullopt;  // only the final sample itself is inside
  } else {
    rep.settling_time = static_cast<double>(first_settled) * stat.dt;
  }
  return rep;
}

GroupBy group_by_from_string(const std::string& name) {
  if (name == "all") return GroupBy::all;
  if (name == "minute") return GroupBy::minute_of_hour;
  if (name == "hour") return GroupBy::hour_of_day;
  if (name == "day") return GroupBy::day_of_week;
  if (name == "month") return GroupBy::month_of_year;
  throw Error(ErrorKind::bad_argument, "unknown group-by: " + name);
}

const char* group_by_name(GroupBy g) {
  switch (g) {
    case GroupBy::all: return "all";
    case GroupBy::minute_of_hour: return "minute";
    case GroupBy::hour_of_day: return "hour";
    case GroupBy::day_of_week: return "day";
    case GroupBy::month_of_year: return "month";
  }
  return "?";
}

namespace {

int group_key_at(const UniformSeries& x, std::size_t k, GroupBy g, int utc_offset_min) {
  if (g == GroupBy::all) return 0;
  const double t = x.time_at(k) + 60.0 * static_cast<double>(utc_offset_min);
  const auto sec = static_cast<std::int64_t>(std::floor(t));
  switch (g) {
    case GroupBy::minute_of_hour: {
      auto m = cal::floor_div(sec, 60) % 60;
      return static_cast<int>(m < 0 ? m + 60 : m);
    }
    case GroupBy::hour_of_day: {
      auto h = cal::floor_div(sec, 3600) % 24;
      return static_cast<int>(h < 0 ? h + 24 : h);
    }
    case GroupBy::day_of_week:
      return cal::iso_weekday(cal::floor_div(sec, 86400));
    case GroupBy::month_of_year:
      return static_cast<int>(cal::civil_from_days(cal::floor_div(sec, 86400)).month);
    default:
      return 0;
  }
}

double percentile_nearest_rank(std::vector<double>& sorted_asc, double q) {
  if (sorted_asc.empty()) return 0.0;
  std::sort(sorted_asc.begin(), sorted_asc.end());
  const auto n = sorted_asc.size();
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
  if (rank == 0) rank = 1;
  if (rank > n) rank = n;
  return sorted_asc[rank - 1];
}

}  // namespace

std::vector<PeggingReport> pegging_amount(const UniformSeries& x, GroupBy group_by,
                                          double peg_tol, int utc_offset_min) {
  if (x.empty()) {
    throw Error(ErrorKind::too_short, "pegging_amount: empty series");
  }
  std::map<int, PeggingReport> groups;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const int key = group_key_at(x, k, group_by, utc_offset_min);
    auto& rep = groups[key];
    rep.group_key = key;
    ++rep.n_samples;
    if (is_pegged(x.values[k], peg_tol)) ++rep.n_pegged;
  }
  std::vector<PeggingReport> out;
  out.reserve(groups.size());
  for (auto& [key, rep] : groups) {
    rep.amount_pct =
        100.0 * static_cast<double>(rep.n_pegged) / static_cast<double>(rep.n_samples);
    out.push_back(rep);
  }
  return out;
}

std::vector<PeggingReport> pegging_durations(const UniformSeries& x, GroupBy group_by,
                                             double peg_tol, int utc_offset_min) {
  if (x.empty()) {
    throw Error(ErrorKind::too_short, "pegging_durations: empty series");
  }
  std::map<int, PeggingReport> groups;
  std::map<int, std::vector<double>> runs;  // seconds, keyed by group of run start

  // Sample tallies give per-group amount_pct alongside the run statistics.
  for (std::size_t k = 0; k < x.size(); ++k) {
    const int key = group_key_at(x, k, group_by, utc_offset_min);
    auto& rep = groups[key];
    rep.group_key = key;
    ++rep.n_samples;
    if (is_pegged(x.values[k], peg_tol)) ++rep.n_pegged;
  }

  std::size_t k = 0;
  while (k < x.size()) {
    if (!is_pegged(x.values[k], peg_tol)) {
      ++k;
      continue;
    }
    std::size_t run_start = k;
    while (k < x.size() && is_pegged(x.values[k], peg_tol)) ++k;
    const int key = group_key_at(x, run_start, group_by, utc_offset_min);
    runs[key].push_back(static_cast<double>(k - run_start) * x.dt);
  }

  std::vector<PeggingReport> out;
  out.reserve(groups.size());
  for (auto& [key, rep] : groups) {
    rep.amount_pct =
        100.0 * static_cast<double>(rep.n_pegged) / static_cast<double>(rep.n_samples);
    auto it = runs.find(key);
    if (it != runs.end() && !it->second.empty()) {
      auto& durs = it->second;
      rep.n_runs = durs.size();
      rep.max_s = *std::max_element(durs.begin(), durs.end());
      rep.mean_s = mean_of(durs);
      rep.p95_s = percentile_nearest_rank(durs, 0.95);
    }
    out.push_back(rep);
  }
  return out;
}

PsdEstimate welch_psd(const UniformSeries& x, std::size_t segment_len, double overlap) {
  if (x.empty()) {
    throw Error(ErrorKind::too_short, "welch_psd: empty series");
  }
  if (segment_len > x.size()) {
    throw Error(ErrorKind::segment_too_long,
                "welch_psd: segment_len " + std::to_string(segment_len) +
                    " exceeds series length " + std::to_string(x.size()));
  }
  if (!num::is_power_of_two(segment_len) || segment_len < 4) {
    throw Error(ErrorKind::bad_argument, "welch_psd: segment_len must be a power of two >= 4");
  }
  if (!(overlap >= 0.0 && overlap < 1.0)) {
    throw Error(ErrorKind::bad_argument, "welch_psd: overlap must be in [0, 1)");
  }
  const std::size_t L = segment_len;
  const auto hop = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(static_cast<double>(L) * (1.0 - overlap))));

  std::vector<double> window(L);
  double win_power = 0.0;  // sum of squared window samples
  for (std::size_t i = 0; i < L; ++i) {
    window[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                      static_cast<double>(L)));
    win_power += window[i] * window[i];
  }

  const std::size_t n_bins = L / 2 + 1;
  std::vector<double> accum(n_bins, 0.0);
  std::vector<std::complex<double>> buf(L);

  std::size_t n_segments = 0;
  for (std::size_t start = 0; start + L <= x.size(); start += hop) {
    double seg_mean = 0.0;
    for (std::size_t i = 0; i < L; ++i) seg_mean += x.values[start + i];
    seg_mean /= static_cast<double>(L);

    for (std::size_t i = 0; i < L; ++i) {
      buf[i] = {(x.values[start + i] - seg_mean) * window[i], 0.0};
    }
    num::fft_radix2(buf);
    for (std::size_t i = 0; i < n_bins; ++i) {
      accum[i] += std::norm(buf[i]);
    }
    ++n_segments;
  }

  PsdEstimate est;
  est.freqs.resize(n_bins);
  est.psd.resize(n_bins);
  const double df = 1.0 / (static_cast<double>(L) * x.dt);
  // One-sided density: interior bins carry both halves of the spectrum.
  const double scale = x.dt / (win_power * static_cast<double>(n_segments));
  for (std::size_t i = 0; i < n_bins; ++i) {
    est.freqs[i] = static_cast<double>(i) * df;
    const double sided = (i == 0 || i == n_bins - 1) ? 1.0 : 2.0;
    est.psd[i] = sided * scale * accum[i];
  }

  std::size_t peak_idx = 1;
  for (std::size_t i = 2; i < n_bins; ++i) {
    if (est.psd[i] > est.psd[peak_idx]) peak_idx = i;
  }
  est.peak_freq = est.freqs[peak_idx];

  const double threshold = est.psd[peak_idx] * std::pow(10.0, -0.3);
  std::size_t bw_idx = peak_idx;
  for (std::size_t i = n_bins; i-- > 1;) {
    if (est.psd[i] >= threshold) {
      bw_idx = i;
      break;
    }
  }
  est.bandwidth_3db = est.freqs[bw_idx];
  return est;
}

std::vector<double> acf(const UniformSeries& x, std::size_t max_lag) {
  const std::size_t n = x.size();
  if (n < 2) {
    throw Error(ErrorKind::too_short, "acf: need at least 2 samples");
  }
  if (max_lag >= (n + 1) / 2) {
    throw Error(ErrorKind::lag_too_large,
                "acf: max_lag " + std::to_string(max_lag) + " must be < length/2");
  }
  const double m = mean_of(x.values);
  double c0 = 0.0;
  for (double v : x.values) c0 += (v - m) * (v - m);
  if (c0 <= 0.0) {
    throw Error(ErrorKind::degenerate_range, "acf: constant series");
  }
  std::vector<double> out(max_lag + 1);
  out[0] = 1.0;
  for (std::size_t k = 1; k <= max_lag; ++k) {
    double c = 0.0;
    for (std::size_t t = 0; t + k < n; ++t) {
      c += (x.values[t] - m) * (x.values[t + k] - m);
    }
    out[k] = c / c0;  // biased estimator: both sums implicitly /N
  }
  return out;
}

std::vector<double> pacf(const UniformSeries& x, std::size_t max_lag) {
  const auto rho = acf(x, max_lag);
  std::vector<double> out(max_lag + 1, 0.0);
  out[0] = 1.0;
  if (max_lag == 0) return out;

  // Durbin-Levinson: out[k] is the last coefficient of the order-k fit.
  std::vector<double> phi(max_lag + 1, 0.0), phi_prev(max_lag + 1, 0.0);
  out[1] = rho[1];
  phi_prev[1] = rho[1];
  for (std::size_t k = 2; k <= max_lag; ++k) {
    double num = rho[k];
    double den = 1.0;
    for (std::size_t j = 1; j < k; ++j) {
      num -= phi_prev[j] * rho[k - j];
      den -= phi_prev[j] * rho[j];
    }
    const double phikk = (std::abs(den) > 1e-300) ? num / den : 0.0;
    out[k] = phikk;
    for (std::size_t j = 1; j < k; ++j) {
      phi[j] = phi_prev[j] - phikk * phi_prev[k - j];
    }
    phi[k] = phikk;
    std::copy(phi.begin(), phi.begin() + static_cast<long>(k) + 1, phi_prev.begin());
  }
  return out;
}

std::vector<double> cross_correlation(const UniformSeries& a, const UniformSeries& b,
                                      std::size_t max_lag) {
  if (a.size() != b.size() || a.dt != b.dt) {
    throw Error(ErrorKind::length_mismatch,
                "cross_correlation: series must have equal length and dt");
  }
  const std::size_t n = a.size();
  if (max_lag + 2 > n) {
    throw Error(ErrorKind::lag_too_large, "cross_correlation: max_lag too large for length");
  }

  std::vector<double> out(2 * max_lag + 1, 0.0);
  for (long lag = -static_cast<long>(max_lag); lag <= static_cast<long>(max_lag); ++lag) {
    // Overlapping windows: pair (a[t], b[t+lag]).
    const std::size_t a_off = lag < 0 ? static_cast<std::size_t>(-lag) : 0;
    const std::size_t b_off = lag > 0 ? static_cast<std::size_t>(lag) : 0;
    const std::size_t len = n - a_off - b_off;

    double ma = 0.0, mb = 0.0;
    for (std::size_t t = 0; t < len; ++t) {
      ma += a.values[a_off + t];
      mb += b.values[b_off + t];
    }
    ma /= static_cast<double>(len);
    mb /= static_cast<double>(len);

    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t t = 0; t < len; ++t) {
      const double da = a.values[a_off + t] - ma;
      const double db = b.values[b_off + t] - mb;
      sab += da * db;
      saa += da * da;
      sbb += db * db;
    }
    const double den = std::sqrt(saa * sbb);
    out[static_cast<std::size_t>(lag + static_cast<long>(max_lag))] =
        den > 0.0 ? sab / den : 0.0;
  }
  return out;
}

}  // namespace agc::stats
