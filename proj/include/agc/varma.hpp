#pragma once

#include <vector>

#include <Eigen/Dense>

#include "agc/arma.hpp"
#include "agc/ingest.hpp"

namespace agc::varma {

/// Bivariate VAR(g) over (Reg-D, lag-filtered frequency). Saturation
/// applies to channel 0 only; the frequency channel keeps physical units
/// and is mean-centered by freq_offset before entering the recursion.
struct VarModel {
  std::size_t g = 0;
  Eigen::Vector2d mu = Eigen::Vector2d::Zero();
  std::vector<Eigen::Matrix2d> phi;  // phi[i-1] acts on r[k-i]
  Eigen::Matrix2d sigma = Eigen::Matrix2d::Zero();
  SaturationBounds bounds = regd_bounds();
  double freq_offset = 0.0;
  bool stable = true;

  /// MA(infinity) weight matrices Psi_0..Psi_{n-1}; Psi_0 = I.
  std::vector<Eigen::Matrix2d> psi_weights(std::size_t n) const;
};

struct TauScanResult {
  std::vector<double> taus;
  std::vector<double> xcorr0;  // lag-0 correlation per tau
  double tau_star = 0.0;       // argmax |xcorr0|, ties toward smaller tau
};

/// Sweeps lag-filter time constants and reports the lag-0 correlation
/// between Reg-D and the filtered, resampled frequency for each.
TauScanResult scan_tau(const UniformSeries& regd, const UniformSeries& freq_raw,
                       const std::vector<double>& taus);

/// Per-equation least squares (conditional MLE for Gaussian innovations):
/// each channel on (1, both channels' lags 1..g).
VarModel fit_var(const ingest::JointSeries& joint, std::size_t g);

/// Channel-0 forecast path; the Reg-D channel is clamped inside the
/// recursion, the frequency channel is not.
arma::ForecastPath forecast_var(const VarModel& model, const ingest::JointSeries& history,
                                std::size_t lead);

std::vector<arma::ForecastEval> evaluate_var(const VarModel& model,
                                             const ingest::JointSeries& test,
                                             const std::vector<std::size_t>& leads,
                                             double peg_tol = 1e-6);

namespace detail {
/// Channel-0 score_rolling callback over a fixed joint series; `test`
/// must outlive the returned callable.
std::function<std::vector<double>(std::size_t, std::size_t)> rolling_forecaster(
    const VarModel& model, const ingest::JointSeries& test);

std::size_t min_origin(const VarModel& model);
}  // namespace detail

struct ComparisonRow {
  std::size_t lead = 0;
  arma::ForecastEval ar;
  arma::ForecastEval var;

  double d_te() const { return ar.te - var.te; }
  double d_se() const { return ar.se && var.se ? *ar.se - *var.se : 0.0; }
  double d_use() const { return ar.use && var.use ? *ar.use - *var.use : 0.0; }
};

/// Scores both models at identical origins and leads on the same test
/// span; positive deltas mean the VAR forecast is more accurate.
std::vector<ComparisonRow> compare(const arma::ArmaModel& ar_model, const VarModel& var_model,
                                   const ingest::JointSeries& test,
                                   const std::vector<std::size_t>& leads, double peg_tol = 1e-6);

}  // namespace agc::varma
