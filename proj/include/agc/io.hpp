#pragma once

#include <string>
#include <variant>
#include <vector>

#include "agc/arma.hpp"
#include "agc/ingest.hpp"
#include "agc/stats.hpp"
#include "agc/synth.hpp"
#include "agc/varma.hpp"

namespace agc::io {

/// Shortest representation that round-trips to the same double.
std::string fmt_double(double x);

/// Fixed 9-significant-digit form used in report files (golden-stable).
std::string fmt_sig9(double x);

/// `timestamp,value` rows with epoch-second timestamps, readable back by
/// the ingest readers with bit-identical values.
void write_series_csv(const UniformSeries& series, const std::string& path);

std::string gap_report_json(const ingest::GapReport& report);

// report writers; column layouts are documented in the README
void write_histogram_csv(const stats::Histogram& h, const std::string& path);
void write_running_moments_csv(const stats::RunningMoments& rm, const std::string& path);
void write_pegging_csv(const std::vector<stats::PeggingReport>& reports, stats::GroupBy group_by,
                       const std::string& path);
void write_psd_csv(const stats::PsdEstimate& psd, const std::string& path);
void write_eval_csv(const std::vector<arma::ForecastEval>& evals, double dt,
                    const std::string& path);
void write_confusion_csv(const std::vector<std::pair<std::size_t, arma::ConfusionMatrix3>>& rows,
                         const std::string& path);
void write_compare_csv(const std::vector<varma::ComparisonRow>& rows, const std::string& path);
void write_scan_csv(const varma::TauScanResult& scan, const std::string& path);
void write_forecast_csv(const arma::ForecastPath& path, double dt, double origin_time,
                        const std::string& out_path);

// JSON forms of the table reports (arrays of row objects)
std::string histogram_json(const stats::Histogram& h);
std::string pegging_json(const std::vector<stats::PeggingReport>& reports,
                         stats::GroupBy group_by);
std::string psd_json(const stats::PsdEstimate& psd);
std::string eval_json(const std::vector<arma::ForecastEval>& evals, double dt);

using AnyModel = std::variant<arma::ArmaModel, varma::VarModel>;

/// Versioned model document (schema agc.model.v1).
std::string model_to_json(const arma::ArmaModel& model,
                          const std::string& training_note = "");
std::string model_to_json(const varma::VarModel& model, double tau_seconds,
                          const std::string& training_note = "");

AnyModel load_model_json(const std::string& path);

/// Lag-filter time constant recorded with a VAR model, if present.
double var_model_tau(const std::string& path);

}  // namespace agc::io
