#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "agc/io.hpp"
#include "agc/synth.hpp"

namespace fs = std::filesystem;

namespace {

std::string tool() {
  const char* p = std::getenv("AGCTOOL");
  REQUIRE_MESSAGE(p != nullptr, "AGCTOOL env var must point at the agctool binary");
  return p;
}

int run(const std::string& args) {
  const std::string cmd = tool() + " " + args + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "agc_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), ("missing file " + p.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) {
    if (c == '\n') ++n;
  }
  return n;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("analyze emits the documented bundle with golden histogram bytes") {
  const auto dir = fresh_dir("analyze");
  write_file(dir / "in.csv", "0,-1\n2,-1\n4,0.5\n6,1\n8,1\n10,1\n12,0\n14,-0.5\n");
  write_file(dir / "cfg.txt", "hist_bins=2\nwelch_segment_len=4\n");

  const int rc = run("--config " + (dir / "cfg.txt").string() + " --out " +
                     (dir / "out").string() + " analyze " + (dir / "in.csv").string());
  CHECK(rc == 0);
  for (const char* f : {"histogram.csv", "running_moments.csv", "settling.json",
                        "pegging_amount.csv", "pegging_duration.csv", "psd.csv", "summary.json",
                        "gap_report.json", "run_config.txt"}) {
    CHECK_MESSAGE(fs::exists(dir / "out" / f), std::string(f));
  }
  CHECK(slurp(dir / "out" / "histogram.csv") ==
        "bin_lo,bin_hi,density\n-1,0,0.375\n0,1,0.625\n");
  const auto config_echo = slurp(dir / "out" / "run_config.txt");
  CHECK(config_echo.find("# agctool 1.0.0") == 0);
  CHECK(config_echo.find("hist_bins=2") != std::string::npos);
  const auto summary = slurp(dir / "out" / "summary.json");
  CHECK(summary.find("\"pegging_pct\": 62.5") != std::string::npos);
}

TEST_CASE("analyze on an empty file fails with an error document") {
  const auto dir = fresh_dir("analyze_err");
  write_file(dir / "empty.csv", "");
  const int rc =
      run("--out " + (dir / "out").string() + " analyze " + (dir / "empty.csv").string());
  CHECK(rc == 3);
  const auto err = slurp(dir / "out" / "error.json");
  CHECK(err.find("TooShort") != std::string::npos);
  CHECK(err.find("\"exit_code\": 3") != std::string::npos);
}

TEST_CASE("unknown config keys are a usage error") {
  const auto dir = fresh_dir("badcfg");
  write_file(dir / "cfg.txt", "not_a_key=1\n");
  const int rc = run("--config " + (dir / "cfg.txt").string() + " --out " +
                     (dir / "out").string() + " synth");
  CHECK(rc == 2);
}

TEST_CASE("numeric and model problems exit with code 4") {
  const auto dir = fresh_dir("numeric_err");
  write_file(dir / "in.csv", "0,0.1\n2,0.2\n4,0.3\n6,0.1\n");
  // the default Welch segment is far longer than four samples
  const int rc =
      run("--out " + (dir / "out").string() + " analyze " + (dir / "in.csv").string());
  CHECK(rc == 4);
  CHECK(slurp(dir / "out" / "error.json").find("SegmentTooLong") != std::string::npos);

  // a var model without its frequency channel is a usage error
  write_file(dir / "var.json",
             R"({"schema":"agc.model.v1","kind":"var","g":1,"mu":[0,0],)"
             R"("phi":[[[0.5,0],[0,0.5]]],"sigma":[[1,0],[0,1]],)"
             R"("bounds":{"lo":-1,"hi":1},"freq_offset":0,"tau_s":600})");
  const int rc2 = run("--out " + (dir / "out2").string() + " eval " +
                      (dir / "var.json").string() + " " + (dir / "in.csv").string());
  CHECK(rc2 == 2);
}

TEST_CASE("synth then fit then eval then forecast round-trips through files") {
  const auto dir = fresh_dir("pipeline");
  write_file(dir / "cfg.txt", "n_samples=6000\nleads=1,5,15\nwelch_segment_len=1024\n");
  const std::string cfg = " --config " + (dir / "cfg.txt").string();

  CHECK(run(cfg + " --out " + (dir / "synth").string() + " --seed 9 synth") == 0);
  const auto synth_meta = slurp(dir / "synth" / "synth_meta.json");
  CHECK(synth_meta.find("\"seed\": 9") != std::string::npos);
  CHECK(synth_meta.find("mt19937_64+box-muller") != std::string::npos);

  const auto series_csv = (dir / "synth" / "synth.csv").string();
  CHECK(run(cfg + " --out " + (dir / "fit").string() + " fit --kind ar " + series_csv) == 0);
  const auto model_path = (dir / "fit" / "model.json").string();
  CHECK(slurp(dir / "fit" / "model.json").find("\"kind\": \"ar\"") != std::string::npos);

  CHECK(run(cfg + " --out " + (dir / "eval").string() + " eval " + model_path + " " +
            series_csv) == 0);
  const auto metrics = slurp(dir / "eval" / "metrics.csv");
  CHECK(count_lines(metrics) == 4);  // header + three leads
  CHECK(metrics.find("lead_samples,lead_s,te,se,use,sle,slope_corr,n,n_sat,n_unsat") == 0);
  // common origins: 6000 samples, o_min = g-1 = 2, max lead 15
  CHECK(metrics.find(",5983,") != std::string::npos);
  const auto confusion = slurp(dir / "eval" / "confusion.csv");
  CHECK(count_lines(confusion) == 1 + 3 * 9);

  CHECK(run(cfg + " --out " + (dir / "fc").string() + " forecast " + model_path + " " +
            series_csv) == 0);
  const auto forecast = slurp(dir / "fc" / "forecast.csv");
  CHECK(count_lines(forecast) == 16);  // header + max lead rows
  CHECK(forecast.find("step,time_s,point,ci95_lo,ci95_hi") == 0);

  // analyze accepts the synthesized file, and its summary std matches a
  // library-side rerun of the same synthesis pipeline bit for bit
  CHECK(run(cfg + " --out " + (dir / "an").string() + " analyze " + series_csv) == 0);
  const auto summary = slurp(dir / "an" / "summary.json");
  CHECK(summary.find("\"n_samples\": 6000") != std::string::npos);

  agc::synth::SynthConfig sc;
  sc.sigma_r = 0.810092587300982;  // the CLI default, as parsed from its string form
  sc.n_samples = 6000;
  sc.seed = 9;
  const auto expected_std = agc::stats::stddev_of(agc::synth::synth_regd(sc).values);
  const auto pos = summary.find("\"std\": ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(summary.substr(pos + 7)) == expected_std);
}

TEST_CASE("forecast output matches a closed-form AR(1) recursion") {
  const auto dir = fresh_dir("fc_golden");
  write_file(dir / "model.json",
             R"({"schema":"agc.model.v1","kind":"ar","g":1,"h":0,"mu":0.0,)"
             R"("phi":[0.5],"theta":[],"sigma2_a":0.04,)"
             R"("bounds":{"lo":-1.0,"hi":1.0}})");
  write_file(dir / "hist.csv", "0,0.8\n");
  write_file(dir / "cfg.txt", "leads=1,2,3\n");

  const int rc = run("--config " + (dir / "cfg.txt").string() + " --out " +
                     (dir / "out").string() + " forecast " + (dir / "model.json").string() +
                     " " + (dir / "hist.csv").string());
  CHECK(rc == 0);

  std::string expected = "step,time_s,point,ci95_lo,ci95_hi\n";
  double point = 0.8, err_var = 0.0, psi = 1.0;
  for (int j = 1; j <= 3; ++j) {
    point = 0.5 * point;
    err_var += 0.04 * psi * psi;
    psi *= 0.5;
    const double half = 1.959963984540054 * std::sqrt(err_var);
    const double lo = std::max(point - half, -1.0);
    const double hi = std::min(point + half, 1.0);
    expected += std::to_string(j) + "," + agc::io::fmt_sig9(2.0 * j) + "," +
                agc::io::fmt_sig9(point) + "," + agc::io::fmt_sig9(lo) + "," +
                agc::io::fmt_sig9(hi) + "\n";
  }
  CHECK(slurp(dir / "out" / "forecast.csv") == expected);
}

TEST_CASE("scan-tau, var fit, and compare consume the frequency channel") {
  const auto dir = fresh_dir("varflow");

  // Synthetic pair: frequency is an anti-correlated copy on the fast grid.
  agc::synth::SynthConfig sc;
  sc.n_samples = 3000;
  sc.seed = 33;
  sc.t0 = 0.0;
  const auto regd = agc::synth::synth_regd(sc);
  agc::UniformSeries freq;
  freq.dt = 0.1;
  freq.t0 = 0.0;
  for (double v : regd.values) {
    for (int i = 0; i < 20; ++i) freq.values.push_back(60.0 - 0.05 * v);
  }
  agc::io::write_series_csv(regd, (dir / "regd.csv").string());
  agc::io::write_series_csv(freq, (dir / "freq.csv").string());

  write_file(dir / "cfg.txt", "tau_grid=2,60,600\ntau=2\nleads=1,5\n");
  const std::string cfg = " --config " + (dir / "cfg.txt").string();
  const std::string inputs = (dir / "regd.csv").string() + " " + (dir / "freq.csv").string();

  CHECK(run(cfg + " --out " + (dir / "scan").string() + " scan-tau " + inputs) == 0);
  const auto scan_json = slurp(dir / "scan" / "scan.json");
  CHECK(scan_json.find("\"tau_star_s\": 2.0") != std::string::npos);
  CHECK(count_lines(slurp(dir / "scan" / "scan.csv")) == 4);

  CHECK(run(cfg + " --out " + (dir / "arfit").string() + " fit --kind ar " +
            (dir / "regd.csv").string()) == 0);
  CHECK(run(cfg + " --out " + (dir / "varfit").string() + " fit --kind var --freq " +
            (dir / "freq.csv").string() + " " + (dir / "regd.csv").string()) == 0);
  CHECK(slurp(dir / "varfit" / "model.json").find("\"kind\": \"var\"") != std::string::npos);

  CHECK(run(cfg + " --out " + (dir / "cmp").string() + " compare " +
            (dir / "arfit" / "model.json").string() + " " +
            (dir / "varfit" / "model.json").string() + " " + inputs) == 0);
  const auto cmp = slurp(dir / "cmp" / "compare.csv");
  CHECK(count_lines(cmp) == 3);
  CHECK(cmp.find("lead_samples,te_ar,te_var") == 0);

  CHECK(run(cfg + " --out " + (dir / "vareval").string() + " eval --freq " +
            (dir / "freq.csv").string() + " " + (dir / "varfit" / "model.json").string() + " " +
            (dir / "regd.csv").string()) == 0);
  CHECK(fs::exists(dir / "vareval" / "metrics.csv"));
}

TEST_CASE("identical invocations produce byte-identical output directories") {
  const auto dir = fresh_dir("determinism");
  write_file(dir / "cfg.txt", "n_samples=2000\nwelch_segment_len=512\nleads=1,5\n");
  const std::string cfg = " --config " + (dir / "cfg.txt").string();

  CHECK(run(cfg + " --out " + (dir / "a").string() + " --seed 5 synth") == 0);
  CHECK(run(cfg + " --out " + (dir / "b").string() + " --seed 5 synth") == 0);
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    const auto name = entry.path().filename();
    CHECK(slurp(entry.path()) == slurp(dir / "b" / name));
  }

  const auto in = (dir / "a" / "synth.csv").string();
  CHECK(run(cfg + " --out " + (dir / "an1").string() + " analyze " + in) == 0);
  CHECK(run(cfg + " --out " + (dir / "an2").string() + " analyze " + in) == 0);
  for (const auto& entry : fs::directory_iterator(dir / "an1")) {
    const auto name = entry.path().filename();
    CHECK(slurp(entry.path()) == slurp(dir / "an2" / name));
  }
}

}  // TEST_SUITE
