// Command-line front end: batch analysis, synthesis, fitting, forecasting,
// and model comparison with CSV/JSON outputs suitable for plotting.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "agc/io.hpp"
#include "agc/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// run configuration: documented defaults, file overrides, CLI overrides

const std::map<std::string, std::string> kDefaults = {
    {"regd_dt", "2"},            // Reg-D sample interval, seconds
    {"freq_dt", "0.1"},          // frequency sample interval, seconds
    {"tau", "600"},              // lag-filter time constant, seconds
    {"tau_grid", "60,120,300,600,900,1200,1800"},
    {"welch_segment_len", "8192"},
    {"welch_overlap", "0.5"},
    {"hist_bins", "100"},
    {"moments_max_rows", "100000"},
    {"settle_rel_tol", "0.02"},
    {"settle_abs_floor", "0.005"},
    {"peg_tol", "1e-6"},
    {"ar_order", "3"},
    {"ma_order", "0"},
    {"var_order", "3"},
    {"leads", "1,5,10,15,30"},
    {"threshold_pct", "10"},
    {"n_samples", "100000"},
    {"sigma_r", "0.810092587300982"},  // 1.25 * sqrt(0.42)
    {"omega_n_hz", "0.005"},
    {"synth_saturate", "1"},
    {"seed", "1"},
    {"utc_offset_min", "0"},
};

class RunConfig {
 public:
  RunConfig() : values_(kDefaults) {}

  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
      throw agc::Error(agc::ErrorKind::unreadable, "cannot open config " + path);
    }
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto strip = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      if (strip(line).empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw agc::Error(agc::ErrorKind::bad_config,
                         "config line " + std::to_string(lineno) + " is not key=value");
      }
      set(strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    }
  }

  void set(const std::string& key, const std::string& value) {
    if (kDefaults.find(key) == kDefaults.end()) {
      throw agc::Error(agc::ErrorKind::bad_config, "unknown config key '" + key + "'");
    }
    values_[key] = value;
  }

  const std::string& str(const std::string& key) const { return values_.at(key); }

  double num(const std::string& key) const {
    const auto& s = values_.at(key);
    try {
      return std::stod(s);
    } catch (const std::exception&) {
      throw agc::Error(agc::ErrorKind::bad_config,
                       "config key '" + key + "' is not numeric: " + s);
    }
  }

  std::uint64_t uint(const std::string& key) const {
    const auto& s = values_.at(key);
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw agc::Error(agc::ErrorKind::bad_config,
                       "config key '" + key + "' is not an unsigned integer: " + s);
    }
  }

  std::vector<std::size_t> lead_list() const {
    std::vector<std::size_t> leads;
    for (double v : num_list("leads")) leads.push_back(static_cast<std::size_t>(v));
    return leads;
  }

  std::vector<double> num_list(const std::string& key) const {
    std::vector<double> out;
    const auto& s = values_.at(key);
    std::size_t pos = 0;
    while (pos < s.size()) {
      auto next = s.find(',', pos);
      if (next == std::string::npos) next = s.size();
      const auto tok = s.substr(pos, next - pos);
      if (!tok.empty()) {
        try {
          out.push_back(std::stod(tok));
        } catch (const std::exception&) {
          throw agc::Error(agc::ErrorKind::bad_config,
                           "config key '" + key + "' has a non-numeric entry: " + tok);
        }
      }
      pos = next + 1;
    }
    if (out.empty()) {
      throw agc::Error(agc::ErrorKind::bad_config, "config key '" + key + "' is empty");
    }
    return out;
  }

  /// Resolved config echo; identical runs produce identical bytes.
  void echo(const fs::path& out_dir, const std::string& command,
            const std::vector<std::pair<std::string, std::string>>& inputs) const {
    std::ofstream out(out_dir / "run_config.txt");
    out << "# " << agc::kToolName << " " << agc::kVersion << "\n";
    out << "command=" << command << "\n";
    for (const auto& [k, v] : inputs) out << k << "=" << v << "\n";
    for (const auto& [k, v] : values_) out << k << "=" << v << "\n";
  }

 private:
  std::map<std::string, std::string> values_;
};

struct GlobalArgs {
  std::string config_path;
  std::string out_dir = "agc_out";
  std::optional<std::uint64_t> seed;
  std::optional<int> utc_offset;
};

fs::path prepare_out(const GlobalArgs& g) {
  fs::path dir(g.out_dir);
  fs::create_directories(dir);
  return dir;
}

RunConfig resolve_config(const GlobalArgs& g) {
  RunConfig cfg;
  if (!g.config_path.empty()) cfg.load_file(g.config_path);
  if (g.seed) cfg.set("seed", std::to_string(*g.seed));
  if (g.utc_offset) cfg.set("utc_offset_min", std::to_string(*g.utc_offset));
  return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    throw agc::Error(agc::ErrorKind::unreadable, "cannot write " + path.string());
  }
  out << text;
}

// ---------------------------------------------------------------------------
// commands

int cmd_analyze(const GlobalArgs& g, const std::string& regd_csv) {
  const auto cfg = resolve_config(g);
  const auto out = prepare_out(g);
  cfg.echo(out, "analyze", {{"input", regd_csv}});

  const auto read = agc::ingest::read_regd_csv(regd_csv, cfg.num("regd_dt"));
  const auto& x = read.series;
  write_text(out / "gap_report.json", agc::io::gap_report_json(read.gaps));

  agc::io::write_histogram_csv(
      agc::stats::histogram(x, static_cast<std::size_t>(cfg.num("hist_bins"))),
      (out / "histogram.csv").string());

  const auto moments = agc::stats::running_moments(x);
  {
    // Decimated for file size; stride keeps runs byte-reproducible.
    const auto max_rows = static_cast<std::size_t>(cfg.num("moments_max_rows"));
    const std::size_t stride = std::max<std::size_t>(1, x.size() / max_rows);
    agc::stats::RunningMoments thin;
    thin.running_mean.dt = thin.running_var.dt = x.dt * static_cast<double>(stride);
    for (std::size_t k = 0; k < x.size(); k += stride) {
      thin.running_mean.values.push_back(moments.running_mean.values[k]);
      thin.running_var.values.push_back(moments.running_var.values[k]);
    }
    agc::io::write_running_moments_csv(thin, (out / "running_moments.csv").string());
  }

  const double rel = cfg.num("settle_rel_tol");
  const double floor = cfg.num("settle_abs_floor");
  const auto settle_mean = agc::stats::settling_time(moments.running_mean, rel, floor);
  const auto settle_var = agc::stats::settling_time(moments.running_var, rel, floor);
  auto settle_json = [](const agc::stats::SettlingReport& r) {
    json j{{"final_value", r.final_value}, {"band", r.band}};
    if (r.settling_time) {
      j["settling_s"] = *r.settling_time;
    } else {
      j["settling_s"] = nullptr;
    }
    return j;
  };
  write_text(out / "settling.json",
             json{{"running_mean", settle_json(settle_mean)},
                  {"running_var", settle_json(settle_var)}}
                 .dump(2));

  const double peg_tol = cfg.num("peg_tol");
  const int utc_off = static_cast<int>(cfg.num("utc_offset_min"));
  using agc::stats::GroupBy;
  const GroupBy groups[] = {GroupBy::all, GroupBy::minute_of_hour, GroupBy::hour_of_day,
                            GroupBy::day_of_week, GroupBy::month_of_year};
  {
    std::ofstream amount(out / "pegging_amount.csv");
    amount << "group_by,group_key,n_samples,n_pegged,amount_pct\n";
    std::ofstream dur(out / "pegging_duration.csv");
    dur << "group_by,group_key,n_runs,max_s,mean_s,p95_s\n";
    for (const auto gb : groups) {
      for (const auto& r : agc::stats::pegging_amount(x, gb, peg_tol, utc_off)) {
        amount << agc::stats::group_by_name(gb) << ',' << r.group_key << ',' << r.n_samples
               << ',' << r.n_pegged << ',' << agc::io::fmt_sig9(r.amount_pct) << '\n';
      }
      for (const auto& r : agc::stats::pegging_durations(x, gb, peg_tol, utc_off)) {
        dur << agc::stats::group_by_name(gb) << ',' << r.group_key << ',' << r.n_runs << ','
            << agc::io::fmt_sig9(r.max_s) << ',' << agc::io::fmt_sig9(r.mean_s) << ','
            << agc::io::fmt_sig9(r.p95_s) << '\n';
      }
    }
  }

  const auto seg = static_cast<std::size_t>(cfg.num("welch_segment_len"));
  const auto psd = agc::stats::welch_psd(x, seg, cfg.num("welch_overlap"));
  agc::io::write_psd_csv(psd, (out / "psd.csv").string());

  const auto peg_all = agc::stats::pegging_amount(x, GroupBy::all, peg_tol, utc_off);
  json summary{
      {"n_samples", x.size()},
      {"dt_s", x.dt},
      {"mean", agc::stats::mean_of(x.values)},
      {"variance", agc::stats::variance_of(x.values)},
      {"std", agc::stats::stddev_of(x.values)},
      {"pegging_pct", peg_all[0].amount_pct},
      {"psd_peak_hz", psd.peak_freq},
      {"psd_bandwidth_3db_hz", psd.bandwidth_3db},
      {"missing_samples_filled", read.gaps.total_missing()},
      {"running_mean_settling_s",
       settle_mean.settling_time ? json(*settle_mean.settling_time) : json(nullptr)},
      {"running_var_settling_s",
       settle_var.settling_time ? json(*settle_var.settling_time) : json(nullptr)},
  };
  write_text(out / "summary.json", summary.dump(2));
  return 0;
}

int cmd_synth(const GlobalArgs& g) {
  const auto cfg = resolve_config(g);
  const auto out = prepare_out(g);
  cfg.echo(out, "synth", {});

  agc::synth::SynthConfig sc;
  sc.omega_n = 2.0 * std::numbers::pi * cfg.num("omega_n_hz");
  sc.sigma_r = cfg.num("sigma_r");
  sc.n_samples = static_cast<std::size_t>(cfg.num("n_samples"));
  sc.dt = cfg.num("regd_dt");
  sc.seed = cfg.uint("seed");
  sc.apply_saturation = cfg.num("synth_saturate") != 0.0;
  sc.t0 = 0.0;

  const auto series = agc::synth::synth_regd(sc);
  agc::io::write_series_csv(series, (out / "synth.csv").string());

  json meta{
      {"seed", sc.seed},
      {"generator", "mt19937_64+box-muller"},
      {"n_samples", sc.n_samples},
      {"dt_s", sc.dt},
      {"sigma_r", sc.sigma_r},
      {"omega_n_rad_s", sc.omega_n},
      {"saturated", sc.apply_saturation},
      {"warmup_samples", agc::synth::warmup_samples(sc.omega_n, sc.dt)},
      {"tool_version", agc::kVersion},
  };
  write_text(out / "synth_meta.json", meta.dump(2));
  return 0;
}

int cmd_fit(const GlobalArgs& g, const std::string& train_csv, const std::string& kind,
            const std::string& freq_csv) {
  const auto cfg = resolve_config(g);
  const auto out = prepare_out(g);
  cfg.echo(out, "fit", {{"input", train_csv}, {"kind", kind}, {"freq", freq_csv}});

  const auto train = agc::ingest::read_regd_csv(train_csv, cfg.num("regd_dt"));
  const auto note = "fit on " + std::to_string(train.series.size()) + " samples at dt=" +
                    agc::io::fmt_double(train.series.dt) + "s";

  std::string doc;
  if (kind == "ar") {
    doc = agc::io::model_to_json(
        agc::arma::fit_ar(train.series, static_cast<std::size_t>(cfg.num("ar_order"))), note);
  } else if (kind == "arma") {
    doc = agc::io::model_to_json(
        agc::arma::fit_arma(train.series, static_cast<std::size_t>(cfg.num("ar_order")),
                            static_cast<std::size_t>(cfg.num("ma_order"))),
        note);
  } else if (kind == "var") {
    if (freq_csv.empty()) {
      throw agc::Error(agc::ErrorKind::bad_argument, "fit --kind var needs --freq <csv>");
    }
    const auto freq = agc::ingest::read_freq_csv(freq_csv, cfg.num("freq_dt"));
    const double tau = cfg.num("tau");
    const auto joint = agc::ingest::build_joint(train.series, freq.series, tau);
    doc = agc::io::model_to_json(
        agc::varma::fit_var(joint, static_cast<std::size_t>(cfg.num("var_order"))), tau, note);
  } else {
    throw agc::Error(agc::ErrorKind::bad_argument, "unknown model kind '" + kind + "'");
  }
  write_text(out / "model.json", doc);
  return 0;
}

agc::ingest::JointSeries joint_for_model(const RunConfig& cfg, const std::string& model_json,
                                         const agc::UniformSeries& regd,
                                         const std::string& freq_csv) {
  if (freq_csv.empty()) {
    throw agc::Error(agc::ErrorKind::bad_argument,
                     "a var model needs --freq <csv> for its second channel");
  }
  const auto freq = agc::ingest::read_freq_csv(freq_csv, cfg.num("freq_dt"));
  return agc::ingest::build_joint(regd, freq.series, agc::io::var_model_tau(model_json));
}

int cmd_forecast(const GlobalArgs& g, const std::string& model_json,
                 const std::string& history_csv, const std::string& freq_csv) {
  const auto cfg = resolve_config(g);
  const auto out = prepare_out(g);
  cfg.echo(out, "forecast", {{"model", model_json}, {"input", history_csv}, {"freq", freq_csv}});

  const auto leads = cfg.lead_list();
  const auto max_lead = *std::max_element(leads.begin(), leads.end());
  const auto history = agc::ingest::read_regd_csv(history_csv, cfg.num("regd_dt"));
  const auto model = agc::io::load_model_json(model_json);

  agc::arma::ForecastPath path;
  if (std::holds_alternative<agc::arma::ArmaModel>(model)) {
    path = agc::arma::forecast(std::get<agc::arma::ArmaModel>(model), history.series, max_lead);
  } else {
    const auto joint = joint_for_model(cfg, model_json, history.series, freq_csv);
    path = agc::varma::forecast_var(std::get<agc::varma::VarModel>(model), joint, max_lead);
  }
  const double origin_time = history.series.time_at(path.origin_index);
  agc::io::write_forecast_csv(path, history.series.dt, origin_time,
                              (out / "forecast.csv").string());
  return 0;
}

int cmd_eval(const GlobalArgs& g, const std::string& model_json, const std::string& test_csv,
             const std::string& freq_csv) {
  const auto cfg = resolve_config(g);
  const auto out = prepare_out(g);
  cfg.echo(out, "eval", {{"model", model_json}, {"input", test_csv}, {"freq", freq_csv}});

  const auto leads = cfg.lead_list();
  const double peg_tol = cfg.num("peg_tol");
  const double threshold_pct = cfg.num("threshold_pct");
  const auto test = agc::ingest::read_regd_csv(test_csv, cfg.num("regd_dt"));
  const auto model = agc::io::load_model_json(model_json);

  std::vector<agc::arma::ForecastEval> evals;
  std::function<std::vector<double>(std::size_t, std::size_t)> fc;
  std::size_t o_min = 0;

  std::optional<agc::ingest::JointSeries> joint;
  if (std::holds_alternative<agc::arma::ArmaModel>(model)) {
    const auto& m = std::get<agc::arma::ArmaModel>(model);
    evals = agc::arma::evaluate(m, test.series, leads, peg_tol);
    fc = agc::arma::detail::rolling_forecaster(m, test.series);
    o_min = agc::arma::detail::min_origin(m);
  } else {
    const auto& m = std::get<agc::varma::VarModel>(model);
    joint = joint_for_model(cfg, model_json, test.series, freq_csv);
    evals = agc::varma::evaluate_var(m, *joint, leads, peg_tol);
    fc = agc::varma::detail::rolling_forecaster(m, *joint);
    o_min = agc::varma::detail::min_origin(m);
  }
  const auto& actual = joint ? joint->regd : test.series;
  agc::io::write_eval_csv(evals, actual.dt, (out / "metrics.csv").string());

  // Slope confusion per lead: forecast trajectory versus the realized signal.
  std::vector<std::pair<std::size_t, agc::arma::ConfusionMatrix3>> confusion;
  for (const std::size_t lead : leads) {
    if (actual.size() < o_min + 2 * lead + 2) continue;
    agc::UniformSeries actual_targets, predicted_targets;
    actual_targets.dt = predicted_targets.dt = actual.dt;
    for (std::size_t o = o_min; o + lead < actual.size(); ++o) {
      actual_targets.values.push_back(actual.values[o + lead]);
      predicted_targets.values.push_back(fc(o, lead)[lead - 1]);
    }
    confusion.emplace_back(lead, agc::arma::classify_slopes(actual_targets, predicted_targets,
                                                            lead, threshold_pct));
  }
  agc::io::write_confusion_csv(confusion, (out / "confusion.csv").string());
  return 0;
}

int cmd_scan_tau(const GlobalArgs& g, const std::string& regd_csv, const std::string& freq_csv) {
  const auto cfg = resolve_config(g);
  const auto out = prepare_out(g);
  cfg.echo(out, "scan-tau", {{"input", regd_csv}, {"freq", freq_csv}});

  const auto regd = agc::ingest::read_regd_csv(regd_csv, cfg.num("regd_dt"));
  const auto freq = agc::ingest::read_freq_csv(freq_csv, cfg.num("freq_dt"));
  const auto scan = agc::varma::scan_tau(regd.series, freq.series, cfg.num_list("tau_grid"));
  agc::io::write_scan_csv(scan, (out / "scan.csv").string());

  double at_star = 0.0;
  for (std::size_t i = 0; i < scan.taus.size(); ++i) {
    if (scan.taus[i] == scan.tau_star) at_star = scan.xcorr0[i];
  }
  write_text(out / "scan.json",
             json{{"tau_star_s", scan.tau_star}, {"xcorr0_at_star", at_star}}.dump(2));
  return 0;
}

int cmd_compare(const GlobalArgs& g, const std::string& ar_json, const std::string& var_json,
                const std::string& regd_csv, const std::string& freq_csv) {
  const auto cfg = resolve_config(g);
  const auto out = prepare_out(g);
  cfg.echo(out, "compare",
           {{"ar_model", ar_json},
            {"var_model", var_json},
            {"input", regd_csv},
            {"freq", freq_csv}});

  const auto ar_any = agc::io::load_model_json(ar_json);
  const auto var_any = agc::io::load_model_json(var_json);
  if (!std::holds_alternative<agc::arma::ArmaModel>(ar_any) ||
      !std::holds_alternative<agc::varma::VarModel>(var_any)) {
    throw agc::Error(agc::ErrorKind::bad_argument,
                     "compare expects an ar/arma model then a var model");
  }
  const auto regd = agc::ingest::read_regd_csv(regd_csv, cfg.num("regd_dt"));
  const auto joint = joint_for_model(cfg, var_json, regd.series, freq_csv);
  const auto rows = agc::varma::compare(std::get<agc::arma::ArmaModel>(ar_any),
                                        std::get<agc::varma::VarModel>(var_any), joint,
                                        cfg.lead_list(), cfg.num("peg_tol"));
  agc::io::write_compare_csv(rows, (out / "compare.csv").string());
  return 0;
}

void emit_error(const GlobalArgs& g, const agc::Error& e) {
  json j{{"error", agc::error_kind_name(e.kind())},
         {"message", e.what()},
         {"exit_code", agc::exit_code_for(e.kind())}};
  if (e.line() >= 0) j["line"] = e.line();
  std::cerr << j.dump(2) << "\n";
  std::error_code ec;
  if (fs::is_directory(g.out_dir, ec)) {
    std::ofstream out(fs::path(g.out_dir) / "error.json");
    out << j.dump(2) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(agc::kToolName) +
               " - analysis, modeling, and forecasting of AGC regulation signals"};
  app.set_version_flag("--version", std::string(agc::kVersion));
  app.require_subcommand(1);

  GlobalArgs g;
  app.add_option("--config", g.config_path, "key=value configuration file");
  app.add_option("--out", g.out_dir, "output directory (created if missing)");
  app.add_option("--seed", g.seed, "random seed override");
  app.add_option("--utc-offset", g.utc_offset, "minutes added to UTC for calendar buckets");

  std::string regd_csv, freq_csv, model_json, var_json, kind = "ar";

  auto* analyze = app.add_subcommand("analyze", "statistics battery for a Reg-D CSV");
  analyze->add_option("regd_csv", regd_csv)->required();

  auto* synth =
      app.add_subcommand("synth", "synthesize a Reg-D-like series from the stochastic model");

  auto* fit = app.add_subcommand("fit", "fit an ar/arma/var model and write model.json");
  fit->add_option("train_csv", regd_csv)->required();
  fit->add_option("--kind", kind, "ar | arma | var")->check(CLI::IsMember({"ar", "arma", "var"}));
  fit->add_option("--freq", freq_csv, "frequency CSV (var only)");

  auto* forecast = app.add_subcommand("forecast", "forecast from the end of a history CSV");
  forecast->add_option("model_json", model_json)->required();
  forecast->add_option("history_csv", regd_csv)->required();
  forecast->add_option("--freq", freq_csv, "frequency CSV (var models)");

  auto* eval = app.add_subcommand("eval", "rolling-origin forecast metrics and confusion");
  eval->add_option("model_json", model_json)->required();
  eval->add_option("test_csv", regd_csv)->required();
  eval->add_option("--freq", freq_csv, "frequency CSV (var models)");

  auto* scan = app.add_subcommand("scan-tau", "lag-filter time-constant scan");
  scan->add_option("regd_csv", regd_csv)->required();
  scan->add_option("freq_csv", freq_csv)->required();

  auto* compare = app.add_subcommand("compare", "AR versus VAR forecast accuracy");
  compare->add_option("ar_model", model_json)->required();
  compare->add_option("var_model", var_json)->required();
  compare->add_option("regd_csv", regd_csv)->required();
  compare->add_option("freq_csv", freq_csv)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(analyze)) return cmd_analyze(g, regd_csv);
    if (app.got_subcommand(synth)) return cmd_synth(g);
    if (app.got_subcommand(fit)) return cmd_fit(g, regd_csv, kind, freq_csv);
    if (app.got_subcommand(forecast)) return cmd_forecast(g, model_json, regd_csv, freq_csv);
    if (app.got_subcommand(eval)) return cmd_eval(g, model_json, regd_csv, freq_csv);
    if (app.got_subcommand(scan)) return cmd_scan_tau(g, regd_csv, freq_csv);
    if (app.got_subcommand(compare)) {
      return cmd_compare(g, model_json, var_json, regd_csv, freq_csv);
    }
  } catch (const agc::Error& e) {
    emit_error(g, e);
    return agc::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "Internal"}, {"message", e.what()}, {"exit_code", 4}}.dump(2)
              << "\n";
    return 4;
  }
  return 2;
}
