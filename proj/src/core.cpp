#include "agc/core.hpp"

#include <cmath>
#include <string>

namespace agc {

UniformSeries lag_filter(const UniformSeries& u, double tau_seconds) {
  if (!(tau_seconds > 0.0) || !std::isfinite(tau_seconds)) {
    throw Error(ErrorKind::non_positive_tau,
                "lag_filter: tau must be positive, got " + std::to_string(tau_seconds));
  }
  if (u.empty()) {
    throw Error(ErrorKind::too_short, "lag_filter: input series is empty");
  }
  const double alpha = std::exp(-u.dt / tau_seconds);
  const double gain = 1.0 - alpha;

  UniformSeries y;
  y.dt = u.dt;
  y.t0 = u.t0;
  y.values.resize(u.size());
  y.values[0] = u.values[0];
  for (std::size_t k = 1; k < u.size(); ++k) {
    y.values[k] = alpha * y.values[k - 1] + gain * u.values[k];
  }
  return y;
}

namespace detail {

std::size_t integer_ratio(double new_dt, double dt) {
  if (!(new_dt > 0.0) || !(dt > 0.0)) {
    throw Error(ErrorKind::non_integer_ratio, "resample: sample intervals must be positive");
  }
  const double ratio = new_dt / dt;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-6 * rounded) {
    throw Error(ErrorKind::non_integer_ratio,
                "resample: new_dt=" + std::to_string(new_dt) + " is not an integer multiple of dt=" +
                    std::to_string(dt));
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace detail

UniformSeries resample_mean(const UniformSeries& u, double new_dt) {
  const std::size_t m = detail::integer_ratio(new_dt, u.dt);
  if (u.empty()) {
    throw Error(ErrorKind::too_short, "resample_mean: input series is empty");
  }
  if (m == 1) return u;

  UniformSeries y;
  y.dt = new_dt;
  y.t0 = u.t0;
  const std::size_t n_blocks = u.size() / m;
  y.values.reserve(n_blocks);
  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t j = 0; j < n_blocks; ++j) {
    double sum = 0.0;
    const std::size_t base = j * m;
    for (std::size_t i = 0; i < m; ++i) sum += u.values[base + i];
    y.values.push_back(sum * inv_m);
  }
  if (y.empty()) {
    throw Error(ErrorKind::too_short, "resample_mean: input shorter than one output block");
  }
  return y;
}

UniformSeries slope(const UniformSeries& u, std::size_t lead) {
  if (lead < 1 || lead >= u.size()) {
    throw Error(ErrorKind::lead_out_of_range,
                "slope: lead " + std::to_string(lead) + " not in [1, " +
                    std::to_string(u.size()) + ")");
  }
  UniformSeries s;
  s.dt = u.dt;
  s.t0 = u.t0;
  const double inv_span = 1.0 / (static_cast<double>(lead) * u.dt);
  s.values.resize(u.size() - lead);
  for (std::size_t k = 0; k + lead < u.size(); ++k) {
    s.values[k] = (u.values[k + lead] - u.values[k]) * inv_span;
  }
  return s;
}

}  // namespace agc
