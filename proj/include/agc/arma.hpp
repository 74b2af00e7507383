#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "agc/core.hpp"

namespace agc::arma {

/// r[k] = mu + sum_i phi_i r[k-i] + a[k] - sum_j theta_j a[k-j],
/// with the output clamped to `bounds` when forecasting in saturated mode.
struct ArmaModel {
  std::size_t g = 0;  // AR order
  std::size_t h = 0;  // MA order
  double mu = 0.0;    // level term of the recursion (regression intercept)
  std::vector<double> phi;
  std::vector<double> theta;
  double sigma2_a = 0.0;  // innovation variance
  SaturationBounds bounds = regd_bounds();

  // diagnostic flags (warning-class: fits are returned regardless)
  bool stationary = true;
  bool invertible = true;

  /// MA(infinity) weights psi_0..psi_{n-1}; psi_0 = 1.
  std::vector<double> psi_weights(std::size_t n) const;
};

/// AR(g) by ordinary least squares of r[k] on (1, r[k-1..k-g]).
ArmaModel fit_ar(const UniformSeries& train, std::size_t g);

/// ARMA(g,h) by the Hannan-Rissanen two-stage regression: a long AR fit
/// supplies innovation estimates, then r[k] is regressed on lagged values
/// and lagged innovations. h = 0 reduces to fit_ar exactly.
ArmaModel fit_arma(const UniformSeries& train, std::size_t g, std::size_t h);

struct ForecastPath {
  std::size_t origin_index = 0;  // index of the last history sample used
  std::size_t lead = 0;
  std::vector<double> point;
  std::vector<double> ci95_lo;
  std::vector<double> ci95_hi;
};

/// Multi-step forecast with future innovations at zero. In saturated mode
/// each iterate is clamped before it feeds later steps; the 95% bands are
/// linear and clamped for display, matching the generative model.
ForecastPath forecast(const ArmaModel& model, const UniformSeries& history, std::size_t lead,
                      bool saturated = true);

struct ForecastEval {
  std::size_t lead = 0;
  double te = 0.0;                // MAE over all targets
  std::optional<double> se;      // MAE over saturated targets; absent if none
  std::optional<double> use;     // MAE over unsaturated targets; absent if none
  double sle = 0.0;               // MAE between origin-anchored slopes
  double slope_corr = 0.0;        // Pearson correlation of those slopes
  std::size_t n = 0;
  std::size_t n_sat = 0;
  std::size_t n_unsat = 0;
  // exact error sums; te == (sum_sat + sum_unsat)/n by construction
  double sum_abs_err = 0.0;
  double sum_abs_err_sat = 0.0;
  double sum_abs_err_unsat = 0.0;
};

/// Scores rolling-origin forecasts supplied by a callback, one common set
/// of origins for every lead: origin o in [o_min, n - 1 - max(leads)],
/// target actual[o + L]. The callback returns the lead-L point forecast
/// made at origin o.
std::vector<ForecastEval> score_rolling(
    const UniformSeries& actual, const std::vector<std::size_t>& leads, std::size_t o_min,
    const std::function<std::vector<double>(std::size_t origin, std::size_t max_lead)>& forecast_fn,
    double peg_tol = 1e-6);

/// Rolling-origin evaluation of a fitted model over the given leads.
std::vector<ForecastEval> evaluate(const ArmaModel& model, const UniformSeries& test,
                                   const std::vector<std::size_t>& leads,
                                   double peg_tol = 1e-6);

namespace detail {
/// score_rolling callback for a fixed model over a fixed series; MA
/// innovations are reconstructed once up front. `test` must outlive the
/// returned callable.
std::function<std::vector<double>(std::size_t, std::size_t)> rolling_forecaster(
    const ArmaModel& model, const UniformSeries& test);

std::size_t min_origin(const ArmaModel& model);
}  // namespace detail

enum class SlopeClass { up = 0, down = 1, flat = 2 };

struct ConfusionMatrix3 {
  std::array<std::array<std::size_t, 3>, 3> counts{};  // [actual][predicted]
  double threshold_pct = 0.0;
  double threshold_abs = 0.0;  // slope units, derived from the actual-slope range

  std::size_t total() const;
  std::size_t diagonal() const;
};

/// Classifies lead-L slopes of both series into Up/Down/Flat with the
/// threshold expressed as a percentage of the actual-slope range.
ConfusionMatrix3 classify_slopes(const UniformSeries& actual, const UniformSeries& predicted,
                                 std::size_t lead, double threshold_pct);

struct SensitivityTable {
  std::size_t g = 0;
  std::vector<std::vector<double>> phi_by_set;  // [set][coef]
  std::vector<double> mu_by_set;
  std::vector<double> phi_mean;    // per coefficient
  std::vector<double> phi_spread;  // max - min per coefficient
};

/// Refits AR(g) on each training set and tabulates coefficient stability.
SensitivityTable sensitivity(const std::vector<UniformSeries>& train_sets, std::size_t g);

}  // namespace agc::arma
