#include "agc/arma.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include <Eigen/Dense>

#include "agc/numeric.hpp"
#include "agc/stats.hpp"

namespace agc::arma {

namespace {

void check_trainable(const UniformSeries& train, std::size_t order, std::size_t min_factor) {
  if (order < 1) {
    throw Error(ErrorKind::bad_argument, "fit: order must be >= 1");
  }
  if (train.size() < min_factor * order) {
    throw Error(ErrorKind::too_short,
                "fit: need at least " + std::to_string(min_factor * order) + " samples, have " +
                    std::to_string(train.size()));
  }
}

// Innovation estimates under the model, zero before index g and outside
// the observed range.
std::vector<double> reconstruct_innovations(const ArmaModel& m, const std::vector<double>& r) {
  std::vector<double> a(r.size(), 0.0);
  for (std::size_t k = m.g; k < r.size(); ++k) {
    double pred = m.mu;
    for (std::size_t i = 1; i <= m.g; ++i) pred += m.phi[i - 1] * r[k - i];
    for (std::size_t j = 1; j <= m.h; ++j) {
      if (k >= m.g + j) pred -= m.theta[j - 1] * a[k - j];
    }
    a[k] = r[k] - pred;
  }
  return a;
}

}  // namespace

std::vector<double> ArmaModel::psi_weights(std::size_t n) const {
  std::vector<double> psi(n, 0.0);
  if (n == 0) return psi;
  psi[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    double w = 0.0;
    for (std::size_t k = 1; k <= std::min(i, g); ++k) w += phi[k - 1] * psi[i - k];
    if (i <= h) w -= theta[i - 1];
    psi[i] = w;
  }
  return psi;
}

ArmaModel fit_ar(const UniformSeries& train, std::size_t g) {
  check_trainable(train, g, 50);

  const auto& r = train.values;
  const auto n_rows = static_cast<Eigen::Index>(r.size() - g);
  const auto n_cols = static_cast<Eigen::Index>(g + 1);
  Eigen::MatrixXd X(n_rows, n_cols);
  Eigen::VectorXd y(n_rows);
  for (Eigen::Index row = 0; row < n_rows; ++row) {
    const std::size_t k = g + static_cast<std::size_t>(row);
    X(row, 0) = 1.0;
    for (std::size_t i = 1; i <= g; ++i) X(row, static_cast<Eigen::Index>(i)) = r[k - i];
    y(row) = r[k];
  }

  const auto fit = num::ols(X, y);
  if (fit.rank < n_cols) {
    throw Error(ErrorKind::singular_regression,
                "fit_ar: regressors are collinear (constant series?)");
  }

  ArmaModel m;
  m.g = g;
  m.h = 0;
  m.mu = fit.coef(0);
  m.phi.resize(g);
  for (std::size_t i = 0; i < g; ++i) m.phi[i] = fit.coef(static_cast<Eigen::Index>(i + 1));
  m.sigma2_a = fit.sigma2;
  m.stationary = num::spectral_radius(num::companion_matrix(m.phi)) < 1.0;
  return m;
}

ArmaModel fit_arma(const UniformSeries& train, std::size_t g, std::size_t h) {
  if (h == 0) return fit_ar(train, g);
  check_trainable(train, g + h, 50);

  const std::size_t p_long = std::max<std::size_t>(20, 2 * (g + h));
  if (train.size() < p_long + h + g + 20) {
    throw Error(ErrorKind::too_short, "fit_arma: series too short for the long-AR stage");
  }
  const ArmaModel long_ar = fit_ar(train, p_long);
  const auto innov = reconstruct_innovations(long_ar, train.values);

  const auto& r = train.values;
  const std::size_t k0 = p_long + h;  // every lagged innovation is an estimated one
  const auto n_rows = static_cast<Eigen::Index>(r.size() - k0);
  const auto n_cols = static_cast<Eigen::Index>(1 + g + h);
  Eigen::MatrixXd X(n_rows, n_cols);
  Eigen::VectorXd y(n_rows);
  for (Eigen::Index row = 0; row < n_rows; ++row) {
    const std::size_t k = k0 + static_cast<std::size_t>(row);
    X(row, 0) = 1.0;
    for (std::size_t i = 1; i <= g; ++i) X(row, static_cast<Eigen::Index>(i)) = r[k - i];
    for (std::size_t j = 1; j <= h; ++j) {
      X(row, static_cast<Eigen::Index>(g + j)) = innov[k - j];
    }
    y(row) = r[k];
  }

  const auto fit = num::ols(X, y);
  if (fit.rank < n_cols) {
    throw Error(ErrorKind::singular_regression, "fit_arma: regressors are collinear");
  }

  ArmaModel m;
  m.g = g;
  m.h = h;
  m.mu = fit.coef(0);
  m.phi.resize(g);
  m.theta.resize(h);
  for (std::size_t i = 0; i < g; ++i) m.phi[i] = fit.coef(static_cast<Eigen::Index>(i + 1));
  // Eq. sign convention: the regressor coefficient on a[k-j] is -theta_j.
  for (std::size_t j = 0; j < h; ++j) m.theta[j] = -fit.coef(static_cast<Eigen::Index>(g + 1 + j));
  m.sigma2_a = fit.sigma2;
  m.stationary = num::spectral_radius(num::companion_matrix(m.phi)) < 1.0;
  m.invertible = num::spectral_radius(num::companion_matrix(m.theta)) < 1.0;
  return m;
}

ForecastPath forecast(const ArmaModel& model, const UniformSeries& history, std::size_t lead,
                      bool saturated) {
  if (history.size() < model.g) {
    throw Error(ErrorKind::history_too_short,
                "forecast: history must hold at least g = " + std::to_string(model.g) +
                    " samples");
  }
  if (lead < 1) {
    throw Error(ErrorKind::bad_argument, "forecast: lead must be >= 1");
  }
  const std::size_t T = history.size();
  const auto innov =
      model.h > 0 ? reconstruct_innovations(model, history.values) : std::vector<double>();

  // Work buffer holds the last g history samples followed by the forecasts.
  std::vector<double> buf(model.g + lead);
  for (std::size_t i = 0; i < model.g; ++i) buf[i] = history.values[T - model.g + i];

  ForecastPath path;
  path.origin_index = T - 1;
  path.lead = lead;
  path.point.resize(lead);
  path.ci95_lo.resize(lead);
  path.ci95_hi.resize(lead);

  const auto psi = model.psi_weights(lead);
  double err_var = 0.0;

  for (std::size_t j = 1; j <= lead; ++j) {
    double pred = model.mu;
    for (std::size_t i = 1; i <= model.g; ++i) pred += model.phi[i - 1] * buf[model.g + j - 1 - i];
    for (std::size_t jj = j; jj <= model.h; ++jj) {
      // Future innovations take their mean 0; past ones come from history.
      if (T - 1 + j >= jj) {
        pred -= model.theta[jj - 1] * innov[T - 1 + j - jj];
      }
    }
    const double stored = saturated ? saturate(pred, model.bounds) : pred;
    buf[model.g + j - 1] = stored;

    err_var += model.sigma2_a * psi[j - 1] * psi[j - 1];
    const double half = 1.959963984540054 * std::sqrt(err_var);
    double lo = stored - half;
    double hi = stored + half;
    if (saturated) {
      lo = saturate(lo, model.bounds);
      hi = saturate(hi, model.bounds);
    }
    path.point[j - 1] = stored;
    path.ci95_lo[j - 1] = lo;
    path.ci95_hi[j - 1] = hi;
  }
  return path;
}

std::vector<ForecastEval> score_rolling(
    const UniformSeries& actual, const std::vector<std::size_t>& leads, std::size_t o_min,
    const std::function<std::vector<double>(std::size_t, std::size_t)>& forecast_fn,
    double peg_tol) {
  if (leads.empty()) {
    throw Error(ErrorKind::bad_argument, "score_rolling: no leads given");
  }
  const std::size_t max_lead = *std::max_element(leads.begin(), leads.end());
  if (*std::min_element(leads.begin(), leads.end()) < 1) {
    throw Error(ErrorKind::bad_argument, "score_rolling: leads must be >= 1");
  }
  if (actual.size() < o_min + max_lead + 1) {
    throw Error(ErrorKind::too_short, "score_rolling: series shorter than o_min + max lead");
  }
  const std::size_t o_max = actual.size() - 1 - max_lead;  // inclusive

  struct Acc {
    double sum_sat = 0.0, sum_unsat = 0.0;
    std::size_t n_sat = 0, n_unsat = 0;
    std::vector<double> slope_actual, slope_fc;
  };
  std::vector<Acc> acc(leads.size());
  for (auto& a : acc) {
    a.slope_actual.reserve(o_max - o_min + 1);
    a.slope_fc.reserve(o_max - o_min + 1);
  }

  for (std::size_t o = o_min; o <= o_max; ++o) {
    const auto path = forecast_fn(o, max_lead);
    for (std::size_t li = 0; li < leads.size(); ++li) {
      const std::size_t L = leads[li];
      const double target = actual.values[o + L];
      const double fc = path[L - 1];
      const double err = std::abs(fc - target);
      if (stats::is_pegged(target, peg_tol)) {
        acc[li].sum_sat += err;
        ++acc[li].n_sat;
      } else {
        acc[li].sum_unsat += err;
        ++acc[li].n_unsat;
      }
      const double inv_span = 1.0 / (static_cast<double>(L) * actual.dt);
      acc[li].slope_actual.push_back((target - actual.values[o]) * inv_span);
      acc[li].slope_fc.push_back((fc - actual.values[o]) * inv_span);
    }
  }

  std::vector<ForecastEval> out(leads.size());
  for (std::size_t li = 0; li < leads.size(); ++li) {
    auto& ev = out[li];
    const auto& a = acc[li];
    ev.lead = leads[li];
    ev.n_sat = a.n_sat;
    ev.n_unsat = a.n_unsat;
    ev.n = a.n_sat + a.n_unsat;
    ev.sum_abs_err_sat = a.sum_sat;
    ev.sum_abs_err_unsat = a.sum_unsat;
    ev.sum_abs_err = a.sum_sat + a.sum_unsat;
    ev.te = ev.sum_abs_err / static_cast<double>(ev.n);
    if (a.n_sat > 0) ev.se = a.sum_sat / static_cast<double>(a.n_sat);
    if (a.n_unsat > 0) ev.use = a.sum_unsat / static_cast<double>(a.n_unsat);

    double sle_sum = 0.0;
    for (std::size_t t = 0; t < a.slope_actual.size(); ++t) {
      sle_sum += std::abs(a.slope_fc[t] - a.slope_actual[t]);
    }
    ev.sle = sle_sum / static_cast<double>(a.slope_actual.size());

    const double ma = stats::mean_of(a.slope_actual);
    const double mf = stats::mean_of(a.slope_fc);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t t = 0; t < a.slope_actual.size(); ++t) {
      const double da = a.slope_actual[t] - ma;
      const double db = a.slope_fc[t] - mf;
      sab += da * db;
      saa += da * da;
      sbb += db * db;
    }
    const double den = std::sqrt(saa * sbb);
    ev.slope_corr = den > 0.0 ? sab / den : 0.0;
  }
  return out;
}

namespace detail {

std::size_t min_origin(const ArmaModel& model) {
  return model.g + model.h == 0 ? 0 : model.g + model.h - 1;
}

std::function<std::vector<double>(std::size_t, std::size_t)> rolling_forecaster(
    const ArmaModel& model, const UniformSeries& test) {
  // Innovations are reconstructed once over the whole span and reused at
  // every origin (entries at k > origin are never read below).
  auto innov = std::make_shared<const std::vector<double>>(
      model.h > 0 ? reconstruct_innovations(model, test.values) : std::vector<double>());
  const std::vector<double>* r = &test.values;

  return [model, r, innov](std::size_t origin, std::size_t max_lead) {
    std::vector<double> buf(model.g + max_lead);
    for (std::size_t i = 0; i < model.g; ++i) buf[i] = (*r)[origin + 1 - model.g + i];
    std::vector<double> out(max_lead);
    for (std::size_t j = 1; j <= max_lead; ++j) {
      double pred = model.mu;
      for (std::size_t i = 1; i <= model.g; ++i) {
        pred += model.phi[i - 1] * buf[model.g + j - 1 - i];
      }
      for (std::size_t jj = j; jj <= model.h; ++jj) {
        if (origin + j >= jj) pred -= model.theta[jj - 1] * (*innov)[origin + j - jj];
      }
      const double stored = saturate(pred, model.bounds);
      buf[model.g + j - 1] = stored;
      out[j - 1] = stored;
    }
    return out;
  };
}

}  // namespace detail

std::vector<ForecastEval> evaluate(const ArmaModel& model, const UniformSeries& test,
                                   const std::vector<std::size_t>& leads, double peg_tol) {
  return score_rolling(test, leads, detail::min_origin(model),
                       detail::rolling_forecaster(model, test), peg_tol);
}

std::size_t ConfusionMatrix3::total() const {
  std::size_t t = 0;
  for (const auto& row : counts) {
    for (auto c : row) t += c;
  }
  return t;
}

std::size_t ConfusionMatrix3::diagonal() const {
  return counts[0][0] + counts[1][1] + counts[2][2];
}

ConfusionMatrix3 classify_slopes(const UniformSeries& actual, const UniformSeries& predicted,
                                 std::size_t lead, double threshold_pct) {
  if (actual.size() != predicted.size()) {
    throw Error(ErrorKind::length_mismatch, "classify_slopes: series lengths differ");
  }
  const UniformSeries sa = slope(actual, lead);
  const UniformSeries sp = slope(predicted, lead);

  const auto [lo_it, hi_it] = std::minmax_element(sa.values.begin(), sa.values.end());
  const double range = *hi_it - *lo_it;
  if (!(range > 0.0)) {
    throw Error(ErrorKind::degenerate_slope_range, "classify_slopes: actual slopes are constant");
  }
  const double threshold = (threshold_pct / 100.0) * range;

  auto classify = [threshold](double s) {
    if (s > threshold) return SlopeClass::up;
    if (s < -threshold) return SlopeClass::down;
    return SlopeClass::flat;
  };

  ConfusionMatrix3 cm;
  cm.threshold_pct = threshold_pct;
  cm.threshold_abs = threshold;
  for (std::size_t k = 0; k < sa.size(); ++k) {
    const auto ca = static_cast<std::size_t>(classify(sa.values[k]));
    const auto cp = static_cast<std::size_t>(classify(sp.values[k]));
    ++cm.counts[ca][cp];
  }
  return cm;
}

SensitivityTable sensitivity(const std::vector<UniformSeries>& train_sets, std::size_t g) {
  if (train_sets.size() < 2) {
    throw Error(ErrorKind::bad_argument, "sensitivity: need at least 2 training sets");
  }
  SensitivityTable table;
  table.g = g;
  for (const auto& set : train_sets) {
    const ArmaModel m = fit_ar(set, g);
    table.phi_by_set.push_back(m.phi);
    table.mu_by_set.push_back(m.mu);
  }
  table.phi_mean.assign(g, 0.0);
  table.phi_spread.assign(g, 0.0);
  for (std::size_t i = 0; i < g; ++i) {
    double lo = table.phi_by_set[0][i], hi = lo, sum = 0.0;
    for (const auto& phi : table.phi_by_set) {
      lo = std::min(lo, phi[i]);
      hi = std::max(hi, phi[i]);
      sum += phi[i];
    }
    table.phi_mean[i] = sum / static_cast<double>(table.phi_by_set.size());
    table.phi_spread[i] = hi - lo;
  }
  return table;
}

}  // namespace agc::arma
