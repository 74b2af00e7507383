#include "agc/varma.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "agc/numeric.hpp"
#include "agc/stats.hpp"

namespace agc::varma {

std::vector<Eigen::Matrix2d> VarModel::psi_weights(std::size_t n) const {
  std::vector<Eigen::Matrix2d> psi(n, Eigen::Matrix2d::Zero());
  if (n == 0) return psi;
  psi[0] = Eigen::Matrix2d::Identity();
  for (std::size_t i = 1; i < n; ++i) {
    Eigen::Matrix2d w = Eigen::Matrix2d::Zero();
    for (std::size_t k = 1; k <= std::min(i, g); ++k) w += phi[k - 1] * psi[i - k];
    psi[i] = w;
  }
  return psi;
}

TauScanResult scan_tau(const UniformSeries& regd, const UniformSeries& freq_raw,
                       const std::vector<double>& taus) {
  if (taus.empty()) {
    throw Error(ErrorKind::bad_argument, "scan_tau: empty tau grid");
  }
  TauScanResult res;
  res.taus = taus;
  res.xcorr0.reserve(taus.size());
  double best_abs = -1.0;
  for (double tau : taus) {
    const auto joint = ingest::build_joint(regd, freq_raw, tau);
    const auto cc = stats::cross_correlation(joint.regd, joint.freq, 0);
    const double c = cc[0];
    res.xcorr0.push_back(c);
    const double a = std::abs(c);
    if (a > best_abs || (a == best_abs && tau < res.tau_star)) {
      best_abs = a;
      res.tau_star = tau;
    }
  }
  return res;
}

VarModel fit_var(const ingest::JointSeries& joint, std::size_t g) {
  if (g < 1) {
    throw Error(ErrorKind::bad_argument, "fit_var: order must be >= 1");
  }
  const std::size_t n = joint.size();
  if (joint.freq.size() != n) {
    throw Error(ErrorKind::length_mismatch, "fit_var: channel lengths differ");
  }
  if (n < 100 * g) {
    throw Error(ErrorKind::too_short, "fit_var: need at least " + std::to_string(100 * g) +
                                          " samples, have " + std::to_string(n));
  }

  VarModel m;
  m.g = g;
  m.freq_offset = stats::mean_of(joint.freq.values);

  const auto& r0 = joint.regd.values;
  std::vector<double> r1(n);
  for (std::size_t k = 0; k < n; ++k) r1[k] = joint.freq.values[k] - m.freq_offset;

  const auto n_rows = static_cast<Eigen::Index>(n - g);
  const auto n_cols = static_cast<Eigen::Index>(1 + 2 * g);
  Eigen::MatrixXd X(n_rows, n_cols);
  Eigen::MatrixXd Y(n_rows, 2);
  for (Eigen::Index row = 0; row < n_rows; ++row) {
    const std::size_t k = g + static_cast<std::size_t>(row);
    X(row, 0) = 1.0;
    for (std::size_t i = 1; i <= g; ++i) {
      X(row, static_cast<Eigen::Index>(2 * i - 1)) = r0[k - i];
      X(row, static_cast<Eigen::Index>(2 * i)) = r1[k - i];
    }
    Y(row, 0) = r0[k];
    Y(row, 1) = r1[k];
  }

  Eigen::MatrixXd coef(n_cols, 2);
  Eigen::MatrixXd resid(n_rows, 2);
  for (int eq = 0; eq < 2; ++eq) {
    const auto fit = num::ols(X, Y.col(eq));
    if (fit.rank < n_cols) {
      throw Error(ErrorKind::singular_regression,
                  "fit_var: regressors are collinear (constant channel?)");
    }
    coef.col(eq) = fit.coef;
    resid.col(eq) = fit.residuals;
  }

  m.mu = coef.row(0).transpose();
  m.phi.resize(g);
  for (std::size_t i = 1; i <= g; ++i) {
    Eigen::Matrix2d p;
    // row = equation, col = source channel
    p(0, 0) = coef(static_cast<Eigen::Index>(2 * i - 1), 0);
    p(0, 1) = coef(static_cast<Eigen::Index>(2 * i), 0);
    p(1, 0) = coef(static_cast<Eigen::Index>(2 * i - 1), 1);
    p(1, 1) = coef(static_cast<Eigen::Index>(2 * i), 1);
    m.phi[i - 1] = p;
  }
  const auto dof = static_cast<double>(n_rows - n_cols);
  m.sigma = resid.transpose() * resid / dof;

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(2 * g, 2 * g);
  for (std::size_t i = 0; i < g; ++i) {
    companion.block(0, static_cast<Eigen::Index>(2 * i), 2, 2) = m.phi[i];
  }
  if (g > 1) {
    companion.block(2, 0, 2 * (static_cast<Eigen::Index>(g) - 1),
                    2 * (static_cast<Eigen::Index>(g) - 1)) =
        Eigen::MatrixXd::Identity(2 * (static_cast<Eigen::Index>(g) - 1),
                                  2 * (static_cast<Eigen::Index>(g) - 1));
  }
  m.stable = num::spectral_radius(companion) < 1.0;
  return m;
}

namespace {

// Shared forward recursion: values before the origin come from history,
// later ones from previous forecast steps; channel 0 clamps in place.
std::vector<Eigen::Vector2d> iterate_var(const VarModel& m, const std::vector<double>& r0,
                                         const std::vector<double>& r1_centered,
                                         std::size_t origin, std::size_t lead) {
  std::vector<Eigen::Vector2d> buf(m.g + lead);
  for (std::size_t i = 0; i < m.g; ++i) {
    const std::size_t k = origin + 1 - m.g + i;
    buf[i] = Eigen::Vector2d(r0[k], r1_centered[k]);
  }
  for (std::size_t j = 1; j <= lead; ++j) {
    Eigen::Vector2d pred = m.mu;
    for (std::size_t i = 1; i <= m.g; ++i) pred += m.phi[i - 1] * buf[m.g + j - 1 - i];
    pred(0) = saturate(pred(0), m.bounds);
    buf[m.g + j - 1] = pred;
  }
  return {buf.begin() + static_cast<long>(m.g), buf.end()};
}

}  // namespace

arma::ForecastPath forecast_var(const VarModel& model, const ingest::JointSeries& history,
                                std::size_t lead) {
  if (history.size() < model.g) {
    throw Error(ErrorKind::history_too_short, "forecast_var: history shorter than lag order");
  }
  if (lead < 1) {
    throw Error(ErrorKind::bad_argument, "forecast_var: lead must be >= 1");
  }
  const std::size_t n = history.size();
  std::vector<double> r1c(n);
  for (std::size_t k = 0; k < n; ++k) r1c[k] = history.freq.values[k] - model.freq_offset;

  const auto steps = iterate_var(model, history.regd.values, r1c, n - 1, lead);
  const auto psi = model.psi_weights(lead);

  arma::ForecastPath path;
  path.origin_index = n - 1;
  path.lead = lead;
  path.point.resize(lead);
  path.ci95_lo.resize(lead);
  path.ci95_hi.resize(lead);
  double err_var = 0.0;
  for (std::size_t j = 1; j <= lead; ++j) {
    err_var += (psi[j - 1] * model.sigma * psi[j - 1].transpose())(0, 0);
    const double half = 1.959963984540054 * std::sqrt(err_var);
    const double point = steps[j - 1](0);
    path.point[j - 1] = point;
    path.ci95_lo[j - 1] = saturate(point - half, model.bounds);
    path.ci95_hi[j - 1] = saturate(point + half, model.bounds);
  }
  return path;
}

namespace detail {

std::size_t min_origin(const VarModel& model) { return model.g == 0 ? 0 : model.g - 1; }

std::function<std::vector<double>(std::size_t, std::size_t)> rolling_forecaster(
    const VarModel& model, const ingest::JointSeries& test) {
  auto r1c = std::make_shared<std::vector<double>>(test.freq.values);
  for (auto& v : *r1c) v -= model.freq_offset;
  const std::vector<double>* r0 = &test.regd.values;

  return [model, r0, r1c](std::size_t origin, std::size_t max_lead) {
    const auto steps = iterate_var(model, *r0, *r1c, origin, max_lead);
    std::vector<double> out(max_lead);
    for (std::size_t j = 0; j < max_lead; ++j) out[j] = steps[j](0);
    return out;
  };
}

}  // namespace detail

std::vector<arma::ForecastEval> evaluate_var(const VarModel& model,
                                             const ingest::JointSeries& test,
                                             const std::vector<std::size_t>& leads,
                                             double peg_tol) {
  return arma::score_rolling(test.regd, leads, detail::min_origin(model),
                             detail::rolling_forecaster(model, test), peg_tol);
}

std::vector<ComparisonRow> compare(const arma::ArmaModel& ar_model, const VarModel& var_model,
                                   const ingest::JointSeries& test,
                                   const std::vector<std::size_t>& leads, double peg_tol) {
  // Identical origins for both models: the larger minimum wins.
  const std::size_t o_min =
      std::max(arma::detail::min_origin(ar_model), detail::min_origin(var_model));

  const auto ar_evals = arma::score_rolling(
      test.regd, leads, o_min, arma::detail::rolling_forecaster(ar_model, test.regd), peg_tol);
  const auto var_evals = arma::score_rolling(
      test.regd, leads, o_min, detail::rolling_forecaster(var_model, test), peg_tol);

  std::vector<ComparisonRow> rows(leads.size());
  for (std::size_t i = 0; i < leads.size(); ++i) {
    rows[i].lead = leads[i];
    rows[i].ar = ar_evals[i];
    rows[i].var = var_evals[i];
  }
  return rows;
}

}  // namespace agc::varma
