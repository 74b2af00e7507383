#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "agc/error.hpp"

namespace agc {

/// Evenly sampled real-valued series. The substrate for every analysis,
/// model, and forecast in this library.
struct UniformSeries {
  std::vector<double> values;
  double dt = 1.0;                 // sample interval, seconds
  std::optional<double> t0;        // epoch seconds of first sample, if known

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
  double operator[](std::size_t k) const { return values[k]; }

  /// Timestamp of sample k (t0 taken as 0 when absent).
  double time_at(std::size_t k) const {
    return (t0 ? *t0 : 0.0) + static_cast<double>(k) * dt;
  }
};

struct SaturationBounds {
  double lo = -1.0;
  double hi = 1.0;

  bool valid() const { return lo < hi; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

inline SaturationBounds regd_bounds() { return SaturationBounds{-1.0, 1.0}; }

inline double saturate(double x, const SaturationBounds& b) {
  if (x < b.lo) return b.lo;
  if (x > b.hi) return b.hi;
  return x;
}

/// First-order lag 1/(tau s + 1), discretized by exact pole mapping with
/// unit DC gain: y[k] = a*y[k-1] + (1-a)*u[k], a = exp(-dt/tau), y[0] = u[0].
UniformSeries lag_filter(const UniformSeries& u, double tau_seconds);

/// Block-mean downsampling. new_dt must be an integer multiple of u.dt;
/// a trailing partial block is dropped.
UniformSeries resample_mean(const UniformSeries& u, double new_dt);

/// s[k] = (u[k+lead] - u[k]) / (lead*dt). Output is `lead` samples shorter.
UniformSeries slope(const UniformSeries& u, std::size_t lead);

namespace detail {
// Ratio new_dt/dt as an exact positive integer, or throws NonIntegerRatio.
std::size_t integer_ratio(double new_dt, double dt);
}  // namespace detail

}  // namespace agc
