#include "agc/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <string_view>

#include "agc/calendar.hpp"

namespace agc::ingest {

namespace {

bool parse_double(std::string_view s, double& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && std::isfinite(out);
}

bool parse_fixed_uint(std::string_view s, std::size_t pos, std::size_t len, unsigned& out) {
  if (pos + len > s.size()) return false;
  unsigned v = 0;
  for (std::size_t i = 0; i < len; ++i) {
    const char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<unsigned>(c - '0');
  }
  out = v;
  return true;
}

bool parse_iso8601(std::string_view s, double& out) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  // YYYY-MM-DD[T ]HH:MM:SS[.frac][Z|+HH:MM|-HH:MM]
  unsigned yr, mo, dy, hh, mm, ss;
  if (s.size() < 19) return false;
  if (!parse_fixed_uint(s, 0, 4, yr) || s[4] != '-' || !parse_fixed_uint(s, 5, 2, mo) ||
      s[7] != '-' || !parse_fixed_uint(s, 8, 2, dy) || (s[10] != 'T' && s[10] != ' ') ||
      !parse_fixed_uint(s, 11, 2, hh) || s[13] != ':' || !parse_fixed_uint(s, 14, 2, mm) ||
      s[16] != ':' || !parse_fixed_uint(s, 17, 2, ss)) {
    return false;
  }
  if (mo < 1 || mo > 12 || dy < 1 || dy > 31 || hh > 23 || mm > 59 || ss > 60) return false;

  std::size_t pos = 19;
  double frac = 0.0;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    double scale = 0.1;
    bool any = false;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
      frac += scale * static_cast<double>(s[pos] - '0');
      scale *= 0.1;
      ++pos;
      any = true;
    }
    if (!any) return false;
  }
  double offset_s = 0.0;
  if (pos < s.size()) {
    if (s[pos] == 'Z' && pos + 1 == s.size()) {
      pos = s.size();
    } else if (s[pos] == '+' || s[pos] == '-') {
      const double sign = s[pos] == '+' ? 1.0 : -1.0;
      unsigned oh = 0, om = 0;
      if (parse_fixed_uint(s, pos + 1, 2, oh)) {
        std::size_t p2 = pos + 3;
        if (p2 < s.size() && s[p2] == ':') ++p2;
        if (!parse_fixed_uint(s, p2, 2, om) || p2 + 2 != s.size()) return false;
        offset_s = sign * (3600.0 * oh + 60.0 * om);
      } else {
        return false;
      }
      pos = s.size();
    } else {
      return false;
    }
  }
  const auto days = cal::days_from_civil(static_cast<int>(yr), mo, dy);
  out = static_cast<double>(days) * 86400.0 + 3600.0 * hh + 60.0 * mm + ss + frac - offset_s;
  return true;
}

struct RowHandler {
  double expected_dt;
  std::function<double(double, long)> validate;  // returns possibly-clamped value
  UniformSeries series;
  GapReport gaps;
  bool have_prev = false;
  double prev_time = 0.0;

  void feed(double t, double v, long line) {
    v = validate(v, line);
    if (!have_prev) {
      series.t0 = t;
      series.values.push_back(v);
      have_prev = true;
      prev_time = t;
      return;
    }
    const double dt_obs = t - prev_time;
    if (dt_obs <= 0.0) {
      throw Error(ErrorKind::non_monotonic_timestamp,
                  "timestamps must be strictly increasing", line);
    }
    const double steps = dt_obs / expected_dt;
    const auto k = static_cast<long long>(std::llround(steps));
    if (k < 1 || std::abs(steps - static_cast<double>(k)) > 0.01) {
      throw Error(ErrorKind::malformed_row,
                  "timestamp spacing is not a multiple of the expected interval", line);
    }
    if (k > 1) {
      const auto missing = static_cast<std::size_t>(k - 1);
      if (missing > kMaxHoldSamples) {
        throw Error(ErrorKind::gap_too_large,
                    "gap of " + std::to_string(missing) + " samples at line " +
                        std::to_string(line) + " exceeds the hold limit of " +
                        std::to_string(kMaxHoldSamples),
                    line);
      }
      Gap gap;
      gap.start_index = series.values.size();
      gap.start_time = prev_time + expected_dt;
      gap.length = missing;
      const double hold = series.values.back();
      for (std::size_t i = 0; i < missing; ++i) series.values.push_back(hold);
      gaps.gaps.push_back(std::move(gap));
    }
    series.values.push_back(v);
    prev_time = t;
  }
};

ReadResult read_csv(const std::string& path, double expected_dt,
                    std::function<double(double, long)> validate) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::unreadable, "cannot open " + path);
  }
  RowHandler handler{expected_dt, std::move(validate), {}, {}, false, 0.0};
  handler.series.dt = expected_dt;

  std::string linebuf;
  long line = 0;
  bool saw_row = false;
  while (std::getline(in, linebuf)) {
    ++line;
    std::string_view sv(linebuf);
    while (!sv.empty() && (sv.back() == '\r' || sv.back() == ' ')) sv.remove_suffix(1);
    if (sv.empty()) continue;

    const auto comma = sv.find(',');
    if (comma == std::string_view::npos || sv.find(',', comma + 1) != std::string_view::npos) {
      if (!saw_row && line == 1) continue;  // header
      throw Error(ErrorKind::malformed_row, "expected exactly two comma-separated fields", line);
    }
    const std::string ts_field(sv.substr(0, comma));
    const std::string_view val_field = sv.substr(comma + 1);

    double t;
    if (!parse_double(ts_field, t)) {
      if (!parse_iso8601(ts_field, t)) {
        if (!saw_row && line == 1) continue;  // header
        throw Error(ErrorKind::malformed_row, "unparseable timestamp '" + ts_field + "'", line);
      }
    }
    double v;
    if (!parse_double(val_field, v)) {
      if (!saw_row && line == 1) continue;  // header with numeric-looking first field
      throw Error(ErrorKind::malformed_row, "unparseable value field", line);
    }
    handler.feed(t, v, line);
    saw_row = true;
  }
  if (!saw_row) {
    throw Error(ErrorKind::too_short, "no data rows in " + path);
  }
  return ReadResult{std::move(handler.series), std::move(handler.gaps)};
}

}  // namespace

double parse_timestamp(const std::string& field, long line) {
  double t;
  if (parse_double(field, t)) return t;
  if (parse_iso8601(field, t)) return t;
  throw Error(ErrorKind::malformed_row, "unparseable timestamp '" + field + "'", line);
}

ReadResult read_regd_csv(const std::string& path, double expected_dt) {
  return read_csv(path, expected_dt, [](double v, long line) {
    if (std::abs(v) > 1.0 + kClampEps) {
      throw Error(ErrorKind::value_out_of_range,
                  "Reg-D value " + std::to_string(v) + " outside [-1, 1]", line);
    }
    return std::clamp(v, -1.0, 1.0);
  });
}

ReadResult read_freq_csv(const std::string& path, double expected_dt) {
  return read_csv(path, expected_dt, [](double v, long line) {
    if (v < 55.0 || v > 65.0) {
      throw Error(ErrorKind::value_out_of_range,
                  "frequency " + std::to_string(v) + " Hz outside [55, 65]", line);
    }
    return v;
  });
}

JointSeries build_joint(const UniformSeries& regd, const UniformSeries& freq_raw,
                        double tau_seconds) {
  if (regd.empty() || freq_raw.empty()) {
    throw Error(ErrorKind::too_short, "build_joint: empty input channel");
  }
  detail::integer_ratio(regd.dt, freq_raw.dt);  // freq grid must divide the Reg-D grid

  UniformSeries freq = resample_mean(lag_filter(freq_raw, tau_seconds), regd.dt);

  const double dt = regd.dt;
  const double tr0 = regd.t0.value_or(0.0);
  const double tf0 = freq.t0.value_or(0.0);
  const double start = std::max(tr0, tf0);
  const double end = std::min(regd.time_at(regd.size() - 1), freq.time_at(freq.size() - 1));
  if (start > end + 1e-9) {
    throw Error(ErrorKind::no_overlap, "build_joint: channels do not overlap in time");
  }
  // Offsets snap to the nearest grid sample; the Reg-D grid defines phase.
  const auto ir = static_cast<std::size_t>(std::llround((start - tr0) / dt));
  const auto jf = static_cast<std::size_t>(std::llround((start - tf0) / dt));
  const std::size_t n = std::min(regd.size() - ir, freq.size() - jf);
  if (n == 0) {
    throw Error(ErrorKind::no_overlap, "build_joint: empty overlap");
  }

  JointSeries joint;
  joint.regd.dt = joint.freq.dt = dt;
  joint.regd.t0 = joint.freq.t0 = regd.t0 ? std::optional<double>(tr0 + static_cast<double>(ir) * dt)
                                          : std::nullopt;
  joint.regd.values.assign(regd.values.begin() + static_cast<long>(ir),
                           regd.values.begin() + static_cast<long>(ir + n));
  joint.freq.values.assign(freq.values.begin() + static_cast<long>(jf),
                           freq.values.begin() + static_cast<long>(jf + n));
  return joint;
}

}  // namespace agc::ingest
