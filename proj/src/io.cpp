#include "agc/io.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

#include <json.hpp>

namespace agc::io {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::unreadable, "cannot write " + path);
  }
  return out;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::unreadable, "cannot open " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::malformed_row, "bad JSON in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace

std::string fmt_double(double x) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

std::string fmt_sig9(double x) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 9);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

void write_series_csv(const UniformSeries& series, const std::string& path) {
  auto out = open_out(path);
  out << "timestamp,value\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    out << fmt_double(series.time_at(k)) << ',' << fmt_double(series.values[k]) << '\n';
  }
}

std::string gap_report_json(const ingest::GapReport& report) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& g : report.gaps) {
    arr.push_back({{"start_index", g.start_index},
                   {"start_time", g.start_time},
                   {"length", g.length},
                   {"policy", g.policy}});
  }
  nlohmann::json j{{"gaps", arr}, {"total_missing", report.total_missing()}};
  return j.dump(2);
}

void write_histogram_csv(const stats::Histogram& h, const std::string& path) {
  auto out = open_out(path);
  out << "bin_lo,bin_hi,density\n";
  for (std::size_t i = 0; i < h.densities.size(); ++i) {
    out << fmt_sig9(h.bin_edges[i]) << ',' << fmt_sig9(h.bin_edges[i + 1]) << ','
        << fmt_sig9(h.densities[i]) << '\n';
  }
}

void write_running_moments_csv(const stats::RunningMoments& rm, const std::string& path) {
  auto out = open_out(path);
  out << "time_s,running_mean,running_var\n";
  for (std::size_t k = 0; k < rm.running_mean.size(); ++k) {
    out << fmt_sig9(static_cast<double>(k) * rm.running_mean.dt) << ','
        << fmt_sig9(rm.running_mean.values[k]) << ',' << fmt_sig9(rm.running_var.values[k])
        << '\n';
  }
}

void write_pegging_csv(const std::vector<stats::PeggingReport>& reports, stats::GroupBy group_by,
                       const std::string& path) {
  auto out = open_out(path);
  out << "group_by,group_key,n_samples,n_pegged,amount_pct,n_runs,max_s,mean_s,p95_s\n";
  for (const auto& r : reports) {
    out << stats::group_by_name(group_by) << ',' << r.group_key << ',' << r.n_samples << ','
        << r.n_pegged << ',' << fmt_sig9(r.amount_pct) << ',' << r.n_runs << ','
        << fmt_sig9(r.max_s) << ',' << fmt_sig9(r.mean_s) << ',' << fmt_sig9(r.p95_s) << '\n';
  }
}

void write_psd_csv(const stats::PsdEstimate& psd, const std::string& path) {
  auto out = open_out(path);
  out << "freq_hz,psd\n";
  for (std::size_t i = 0; i < psd.freqs.size(); ++i) {
    out << fmt_sig9(psd.freqs[i]) << ',' << fmt_sig9(psd.psd[i]) << '\n';
  }
}

void write_eval_csv(const std::vector<arma::ForecastEval>& evals, double dt,
                    const std::string& path) {
  auto out = open_out(path);
  out << "lead_samples,lead_s,te,se,use,sle,slope_corr,n,n_sat,n_unsat\n";
  for (const auto& ev : evals) {
    out << ev.lead << ',' << fmt_sig9(static_cast<double>(ev.lead) * dt) << ','
        << fmt_sig9(ev.te) << ',';
    if (ev.se) out << fmt_sig9(*ev.se);
    out << ',';
    if (ev.use) out << fmt_sig9(*ev.use);
    out << ',' << fmt_sig9(ev.sle) << ',' << fmt_sig9(ev.slope_corr) << ',' << ev.n << ','
        << ev.n_sat << ',' << ev.n_unsat << '\n';
  }
}

void write_confusion_csv(const std::vector<std::pair<std::size_t, arma::ConfusionMatrix3>>& rows,
                         const std::string& path) {
  static const char* kClass[3] = {"up", "down", "flat"};
  auto out = open_out(path);
  out << "lead_samples,threshold_pct,actual,predicted,count\n";
  for (const auto& [lead, cm] : rows) {
    for (int a = 0; a < 3; ++a) {
      for (int p = 0; p < 3; ++p) {
        out << lead << ',' << fmt_sig9(cm.threshold_pct) << ',' << kClass[a] << ',' << kClass[p]
            << ',' << cm.counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(p)] << '\n';
      }
    }
  }
}

void write_compare_csv(const std::vector<varma::ComparisonRow>& rows, const std::string& path) {
  auto out = open_out(path);
  out << "lead_samples,te_ar,te_var,se_ar,se_var,use_ar,use_var,d_te,d_se,d_use\n";
  for (const auto& row : rows) {
    auto opt = [](const std::optional<double>& v) { return v ? fmt_sig9(*v) : std::string(); };
    out << row.lead << ',' << fmt_sig9(row.ar.te) << ',' << fmt_sig9(row.var.te) << ','
        << opt(row.ar.se) << ',' << opt(row.var.se) << ',' << opt(row.ar.use) << ','
        << opt(row.var.use) << ',' << fmt_sig9(row.d_te()) << ',' << fmt_sig9(row.d_se()) << ','
        << fmt_sig9(row.d_use()) << '\n';
  }
}

void write_scan_csv(const varma::TauScanResult& scan, const std::string& path) {
  auto out = open_out(path);
  out << "tau_s,xcorr0\n";
  for (std::size_t i = 0; i < scan.taus.size(); ++i) {
    out << fmt_sig9(scan.taus[i]) << ',' << fmt_sig9(scan.xcorr0[i]) << '\n';
  }
}

void write_forecast_csv(const arma::ForecastPath& path, double dt, double origin_time,
                        const std::string& out_path) {
  auto out = open_out(out_path);
  out << "step,time_s,point,ci95_lo,ci95_hi\n";
  for (std::size_t j = 0; j < path.point.size(); ++j) {
    out << (j + 1) << ',' << fmt_sig9(origin_time + static_cast<double>(j + 1) * dt) << ','
        << fmt_sig9(path.point[j]) << ',' << fmt_sig9(path.ci95_lo[j]) << ','
        << fmt_sig9(path.ci95_hi[j]) << '\n';
  }
}

std::string histogram_json(const stats::Histogram& h) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < h.densities.size(); ++i) {
    rows.push_back({{"bin_lo", h.bin_edges[i]},
                    {"bin_hi", h.bin_edges[i + 1]},
                    {"density", h.densities[i]}});
  }
  return rows.dump(2);
}

std::string pegging_json(const std::vector<stats::PeggingReport>& reports,
                         stats::GroupBy group_by) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : reports) {
    rows.push_back({{"group_by", stats::group_by_name(group_by)},
                    {"group_key", r.group_key},
                    {"n_samples", r.n_samples},
                    {"n_pegged", r.n_pegged},
                    {"amount_pct", r.amount_pct},
                    {"n_runs", r.n_runs},
                    {"max_s", r.max_s},
                    {"mean_s", r.mean_s},
                    {"p95_s", r.p95_s}});
  }
  return rows.dump(2);
}

std::string psd_json(const stats::PsdEstimate& psd) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < psd.freqs.size(); ++i) {
    rows.push_back({{"freq_hz", psd.freqs[i]}, {"psd", psd.psd[i]}});
  }
  nlohmann::json j{{"peak_freq_hz", psd.peak_freq},
                   {"bandwidth_3db_hz", psd.bandwidth_3db},
                   {"bins", rows}};
  return j.dump(2);
}

std::string eval_json(const std::vector<arma::ForecastEval>& evals, double dt) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& ev : evals) {
    nlohmann::json row{{"lead_samples", ev.lead},
                       {"lead_s", static_cast<double>(ev.lead) * dt},
                       {"te", ev.te},
                       {"sle", ev.sle},
                       {"slope_corr", ev.slope_corr},
                       {"n", ev.n},
                       {"n_sat", ev.n_sat},
                       {"n_unsat", ev.n_unsat}};
    row["se"] = ev.se ? nlohmann::json(*ev.se) : nlohmann::json(nullptr);
    row["use"] = ev.use ? nlohmann::json(*ev.use) : nlohmann::json(nullptr);
    rows.push_back(row);
  }
  return rows.dump(2);
}

namespace {

constexpr const char* kSchema = "agc.model.v1";

nlohmann::json bounds_json(const SaturationBounds& b) {
  return {{"lo", b.lo}, {"hi", b.hi}};
}

SaturationBounds bounds_from_json(const nlohmann::json& j) {
  return SaturationBounds{j.at("lo").get<double>(), j.at("hi").get<double>()};
}

}  // namespace

std::string model_to_json(const arma::ArmaModel& model, const std::string& training_note) {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["kind"] = model.h > 0 ? "arma" : "ar";
  j["g"] = model.g;
  j["h"] = model.h;
  j["mu"] = model.mu;
  j["phi"] = model.phi;
  j["theta"] = model.theta;
  j["sigma2_a"] = model.sigma2_a;
  j["bounds"] = bounds_json(model.bounds);
  j["stationary"] = model.stationary;
  j["invertible"] = model.invertible;
  if (!training_note.empty()) j["training"] = training_note;
  return j.dump(2);
}

std::string model_to_json(const varma::VarModel& model, double tau_seconds,
                          const std::string& training_note) {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["kind"] = "var";
  j["g"] = model.g;
  j["mu"] = {model.mu(0), model.mu(1)};
  nlohmann::json phis = nlohmann::json::array();
  for (const auto& p : model.phi) {
    phis.push_back({{p(0, 0), p(0, 1)}, {p(1, 0), p(1, 1)}});
  }
  j["phi"] = phis;
  j["sigma"] = {{model.sigma(0, 0), model.sigma(0, 1)},
                {model.sigma(1, 0), model.sigma(1, 1)}};
  j["bounds"] = bounds_json(model.bounds);
  j["freq_offset"] = model.freq_offset;
  j["tau_s"] = tau_seconds;
  j["stable"] = model.stable;
  if (!training_note.empty()) j["training"] = training_note;
  return j.dump(2);
}

AnyModel load_model_json(const std::string& path) {
  const auto j = read_json_file(path);
  try {
    if (j.at("schema").get<std::string>() != kSchema) {
      throw Error(ErrorKind::malformed_row,
                  "unsupported model schema in " + path + ": " + j["schema"].dump());
    }
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "ar" || kind == "arma") {
      arma::ArmaModel m;
      m.g = j.at("g").get<std::size_t>();
      m.h = j.at("h").get<std::size_t>();
      m.mu = j.at("mu").get<double>();
      m.phi = j.at("phi").get<std::vector<double>>();
      m.theta = j.at("theta").get<std::vector<double>>();
      m.sigma2_a = j.at("sigma2_a").get<double>();
      m.bounds = bounds_from_json(j.at("bounds"));
      m.stationary = j.value("stationary", true);
      m.invertible = j.value("invertible", true);
      if (m.phi.size() != m.g || m.theta.size() != m.h) {
        throw Error(ErrorKind::malformed_row, "model orders disagree with coefficients in " + path);
      }
      return m;
    }
    if (kind == "var") {
      varma::VarModel m;
      m.g = j.at("g").get<std::size_t>();
      m.mu = Eigen::Vector2d(j.at("mu").at(0).get<double>(), j.at("mu").at(1).get<double>());
      for (const auto& pj : j.at("phi")) {
        Eigen::Matrix2d p;
        p << pj.at(0).at(0).get<double>(), pj.at(0).at(1).get<double>(),
            pj.at(1).at(0).get<double>(), pj.at(1).at(1).get<double>();
        m.phi.push_back(p);
      }
      const auto& sj = j.at("sigma");
      m.sigma << sj.at(0).at(0).get<double>(), sj.at(0).at(1).get<double>(),
          sj.at(1).at(0).get<double>(), sj.at(1).at(1).get<double>();
      m.bounds = bounds_from_json(j.at("bounds"));
      m.freq_offset = j.at("freq_offset").get<double>();
      m.stable = j.value("stable", true);
      if (m.phi.size() != m.g) {
        throw Error(ErrorKind::malformed_row, "model orders disagree with coefficients in " + path);
      }
      return m;
    }
    throw Error(ErrorKind::malformed_row, "unknown model kind '" + kind + "' in " + path);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::malformed_row, "bad model document " + path + ": " + e.what());
  }
}

double var_model_tau(const std::string& path) {
  const auto j = read_json_file(path);
  return j.value("tau_s", 600.0);
}

}  // namespace agc::io
