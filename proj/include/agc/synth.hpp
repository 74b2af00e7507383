#pragma once

#include <cstdint>
#include <numbers>

#include <Eigen/Dense>

#include "agc/core.hpp"

namespace agc::synth {

/// Third-order Butterworth coloring filter
///     F(s) = sqrt(3/wn) / ((s/wn)^3 + 2(s/wn)^2 + 2(s/wn) + 1)
/// whose continuous H2 norm is 1 by construction, together with its
/// bilinear-transform state-space realization at sample interval dt.
struct Butter3 {
  double omega_n = 0.0;  // rad/s
  double dt = 0.0;

  // continuous-time numerator gain and monic denominator s^3+c2 s^2+c1 s+c0
  double num_gain = 0.0;
  double den_c2 = 0.0, den_c1 = 0.0, den_c0 = 0.0;
  double continuous_h2 = 0.0;

  Eigen::Matrix3d A;
  Eigen::Vector3d B;
  Eigen::RowVector3d C;
  double D = 0.0;
  double discrete_h2 = 0.0;  // stationary output std under unit white noise

  /// Extra output gain making the discrete noise-to-output std exactly 1.
  double output_gain() const { return 1.0 / discrete_h2; }

  /// Magnitude of the realized discrete frequency response at f Hz.
  double response_mag(double freq_hz) const;

  /// Frequency where the realized response has fallen 3 dB below DC.
  double cutoff_3db_hz() const;
};

/// Builds the filter, verifies the unit continuous H2 norm via the
/// continuous Lyapunov equation, discretizes by bilinear transform, and
/// solves the discrete Lyapunov equation for the renormalization gain.
Butter3 design_butter3(double omega_n, double dt);

struct SynthConfig {
  double omega_n = 2.0 * std::numbers::pi * 0.005;  // rad/s; 5 mHz bandwidth
  double sigma_r = 1.25 * 0.6480740698407860;       // 1.25 * sqrt(0.42)
  std::size_t n_samples = 0;
  double dt = 2.0;
  std::uint64_t seed = 0;
  SaturationBounds bounds = regd_bounds();
  bool apply_saturation = true;  // diagnostic: false leaves the scaled signal unclipped
  std::optional<double> t0;
};

/// Gaussian white noise -> unit-variance Butterworth coloring -> sigma_r
/// gain -> saturation. Deterministic for a fixed seed; the zero-state
/// transient is discarded before the first emitted sample.
UniformSeries synth_regd(const SynthConfig& cfg);

std::size_t warmup_samples(double omega_n, double dt);

struct ModelValidation {
  double std_err_pct = 0.0;   // 100*|std(model)-std(ref)|/std(ref)
  double mean_abs_err = 0.0;  // |mean(model)-mean(ref)|
  double peg_err_pct = 0.0;   // |peg%(model)-peg%(ref)| percentage points
};

ModelValidation validate_model(const UniformSeries& model_out, const UniformSeries& reference);

}  // namespace agc::synth
