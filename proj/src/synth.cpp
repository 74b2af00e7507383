#include "agc/synth.hpp"

#include <cmath>
#include <complex>

#include "agc/numeric.hpp"
#include "agc/stats.hpp"

namespace agc::synth {

double Butter3::response_mag(double freq_hz) const {
  const std::complex<double> z =
      std::exp(std::complex<double>(0.0, 2.0 * std::numbers::pi * freq_hz * dt));
  Eigen::Matrix3cd m = z * Eigen::Matrix3cd::Identity() - A.cast<std::complex<double>>();
  const Eigen::Vector3cd x = m.partialPivLu().solve(B.cast<std::complex<double>>());
  const std::complex<double> h = (C.cast<std::complex<double>>() * x).value() + D;
  return std::abs(h);
}

double Butter3::cutoff_3db_hz() const {
  const double target = response_mag(0.0) / std::sqrt(2.0);
  double lo = 0.0;
  double hi = 0.5 / dt;  // Nyquist
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (response_mag(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Butter3 design_butter3(double omega_n, double dt) {
  if (!(omega_n > 0.0) || !(dt > 0.0)) {
    throw Error(ErrorKind::bad_argument, "design_butter3: omega_n and dt must be positive");
  }
  if (omega_n >= std::numbers::pi / dt) {
    throw Error(ErrorKind::cutoff_above_nyquist,
                "design_butter3: omega_n " + std::to_string(omega_n) +
                    " rad/s is at or above Nyquist " + std::to_string(std::numbers::pi / dt));
  }

  Butter3 f;
  f.omega_n = omega_n;
  f.dt = dt;
  f.num_gain = std::sqrt(3.0 / omega_n) * omega_n * omega_n * omega_n;
  f.den_c2 = 2.0 * omega_n;
  f.den_c1 = 2.0 * omega_n * omega_n;
  f.den_c0 = omega_n * omega_n * omega_n;

  // controllable canonical form of num_gain / (s^3 + c2 s^2 + c1 s + c0)
  Eigen::Matrix3d Ac;
  Ac << 0, 1, 0,
        0, 0, 1,
        -f.den_c0, -f.den_c1, -f.den_c2;
  Eigen::Vector3d Bc(0.0, 0.0, 1.0);
  Eigen::RowVector3d Cc(f.num_gain, 0.0, 0.0);

  const Eigen::Matrix3d Wc = num::lyapunov_continuous(Ac, Bc * Bc.transpose());
  f.continuous_h2 = std::sqrt((Cc * Wc * Cc.transpose()).value());
  if (std::abs(f.continuous_h2 - 1.0) > 1e-3) {
    throw Error(ErrorKind::bad_argument,
                "design_butter3: continuous H2 norm " + std::to_string(f.continuous_h2) +
                    " deviates from 1");
  }

  // bilinear transform
  const Eigen::Matrix3d eye = Eigen::Matrix3d::Identity();
  const Eigen::Matrix3d ima_inv = (eye - Ac * (dt / 2.0)).inverse();
  f.A = ima_inv * (eye + Ac * (dt / 2.0));
  f.B = ima_inv * Bc * dt;
  f.C = Cc * ima_inv;
  f.D = (Cc * ima_inv * Bc).value() * dt / 2.0;

  if (num::spectral_radius(f.A) >= 1.0) {
    throw Error(ErrorKind::bad_argument, "design_butter3: discretization is unstable");
  }

  const Eigen::Matrix3d P = num::lyapunov_discrete(f.A, f.B * f.B.transpose());
  f.discrete_h2 = std::sqrt((f.C * P * f.C.transpose()).value() + f.D * f.D);
  return f;
}

std::size_t warmup_samples(double omega_n, double dt) {
  return static_cast<std::size_t>(std::ceil(10.0 / (omega_n * dt)));
}

UniformSeries synth_regd(const SynthConfig& cfg) {
  if (cfg.n_samples < 1) {
    throw Error(ErrorKind::bad_argument, "synth_regd: n_samples must be >= 1");
  }
  if (!(cfg.sigma_r >= 0.0)) {
    throw Error(ErrorKind::bad_argument, "synth_regd: sigma_r must be non-negative");
  }
  if (!cfg.bounds.valid()) {
    throw Error(ErrorKind::bad_argument, "synth_regd: invalid saturation bounds");
  }
  const Butter3 filt = design_butter3(cfg.omega_n, cfg.dt);
  const double gain = filt.output_gain() * cfg.sigma_r;

  num::GaussianSource noise(cfg.seed);
  Eigen::Vector3d state = Eigen::Vector3d::Zero();

  const std::size_t warmup = warmup_samples(cfg.omega_n, cfg.dt);
  for (std::size_t k = 0; k < warmup; ++k) {
    state = filt.A * state + filt.B * noise.next();
  }

  UniformSeries out;
  out.dt = cfg.dt;
  out.t0 = cfg.t0;
  out.values.resize(cfg.n_samples);
  for (std::size_t k = 0; k < cfg.n_samples; ++k) {
    const double w = noise.next();
    const double y = (filt.C * state).value() + filt.D * w;
    state = filt.A * state + filt.B * w;
    const double scaled = gain * y;
    out.values[k] = cfg.apply_saturation ? saturate(scaled, cfg.bounds) : scaled;
  }
  return out;
}

ModelValidation validate_model(const UniformSeries& model_out, const UniformSeries& reference) {
  if (model_out.empty() || reference.empty()) {
    throw Error(ErrorKind::too_short, "validate_model: empty series");
  }
  const double ref_std = stats::stddev_of(reference.values);
  if (ref_std <= 0.0) {
    throw Error(ErrorKind::zero_reference_std, "validate_model: reference std is zero");
  }
  const double model_std = stats::stddev_of(model_out.values);

  auto peg_pct = [](const UniformSeries& s) {
    std::size_t n = 0;
    for (double v : s.values) {
      if (stats::is_pegged(v)) ++n;
    }
    return 100.0 * static_cast<double>(n) / static_cast<double>(s.size());
  };

  ModelValidation v;
  v.std_err_pct = 100.0 * std::abs(model_std - ref_std) / ref_std;
  v.mean_abs_err = std::abs(stats::mean_of(model_out.values) - stats::mean_of(reference.values));
  v.peg_err_pct = std::abs(peg_pct(model_out) - peg_pct(reference));
  return v;
}

}  // namespace agc::synth
