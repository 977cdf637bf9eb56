#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "heatdml/csv.hpp"

#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  static const fs::path io_dir = testutil::fresh_dir("cli-io");
  const fs::path out_file = io_dir / ("out" + std::to_string(counter) + ".txt");
  const fs::path err_file = io_dir / ("err" + std::to_string(counter) + ".txt");
  ++counter;

  const std::string cmd = std::string("\"") + HEATDML_CLI_PATH + "\" " + args +
                          " >\"" + out_file.string() + "\" 2>\"" +
                          err_file.string() + "\"";
  const int status = std::system(cmd.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = heatdml::read_text_file(out_file);
  result.err = heatdml::read_text_file(err_file);
  return result;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

// Generates a synthetic city's input tables through the CLI itself.
void stage_city(const fs::path& dir, const std::string& prefix,
                unsigned seed, int n) {
  const CliResult r = run_cli(
      "synth --out-weather " + q(dir / (prefix + "_w.csv")) + " --out-ntl " +
      q(dir / (prefix + "_n.csv")) + " --n " + std::to_string(n) + " --seed " +
      std::to_string(seed));
  REQUIRE(r.exit_code == 0);
}

std::map<fs::path, std::string> slurp_all(const fs::path& dir) {
  std::map<fs::path, std::string> bytes;
  for (const auto& entry : fs::directory_iterator(dir)) {
    bytes[entry.path()] = heatdml::read_text_file(entry.path());
  }
  return bytes;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("version and help exit cleanly, bad usage does not") {
  const CliResult version = run_cli("--version");
  CHECK(version.exit_code == 0);
  CHECK(version.out.find("0.1.0") != std::string::npos);

  const CliResult help = run_cli("--help");
  CHECK(help.exit_code == 0);
  CHECK(help.out.find("pipeline") != std::string::npos);
  CHECK(help.out.find("detect-heatwaves") != std::string::npos);

  CHECK(run_cli("").exit_code == 1);
  CHECK(run_cli("frobnicate").exit_code == 1);
  CHECK(run_cli("fit").exit_code == 1);
}

TEST_CASE("episode detection reproduces the checked-in table") {
  const fs::path out = testutil::fresh_dir("cli-golden") / "hw.csv";
  const CliResult r = run_cli(
      "detect-heatwaves --weather " + q(testutil::fixture("golden_weather.csv")) +
      " --out " + q(out));
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("onsets") != std::string::npos);
  CHECK(heatdml::read_text_file(out) ==
        heatdml::read_text_file(testutil::fixture("golden_heatwaves.csv")));
}

TEST_CASE("error classes map onto exit codes") {
  const fs::path dir = testutil::fresh_dir("cli-exit");

  // Absent input file: an io failure, not a usage problem.
  const CliResult io = run_cli("fit --features " + q(dir / "absent.csv") +
                               " --out " + q(dir / "e.csv"));
  CHECK(io.exit_code == 2);
  CHECK(io.err.find("absent.csv") != std::string::npos);

  const CliResult pipe = run_cli("pipeline --config " + q(dir / "absent.json"));
  CHECK(pipe.exit_code == 2);

  // A config that parses but is invalid.
  heatdml::write_text_file(dir / "bad.json", "{\"cities\": []}");
  const CliResult bad = run_cli("pipeline --config " + q(dir / "bad.json"));
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("cities") != std::string::npos);

  // A weather table with the wrong columns.
  heatdml::write_text_file(dir / "wrong.csv", "a,b\n1,2\n");
  const CliResult schema = run_cli("detect-heatwaves --weather " +
                                   q(dir / "wrong.csv") + " --out " +
                                   q(dir / "hw.csv"));
  CHECK(schema.exit_code == 1);
}

TEST_CASE("a synthetic generate/fit chain recovers the planted effect") {
  const fs::path dir = testutil::fresh_dir("cli-chain");
  const CliResult gen = run_cli(
      "synth --out-weather " + q(dir / "w.csv") + " --out-ntl " +
      q(dir / "n.csv") + " --out-features " + q(dir / "f.csv") +
      " --n 2000 --seed 3");
  REQUIRE(gen.exit_code == 0);
  CHECK(gen.out.find("true theta 0.5") != std::string::npos);
  REQUIRE(fs::exists(dir / "f.csv"));

  const CliResult fit = run_cli("fit --features " + q(dir / "f.csv") +
                                " --out " + q(dir / "est.csv") +
                                " --k 5 --seed 11");
  REQUIRE(fit.exit_code == 0);
  CHECK(fit.out.find("theta") != std::string::npos);

  const heatdml::CsvTable est = heatdml::read_csv(dir / "est.csv");
  REQUIRE(est.rows.size() == 1);
  const double theta = heatdml::parse_double(est.rows[0][3], "theta");
  const double se = heatdml::parse_double(est.rows[0][4], "se");
  CHECK(std::abs(theta - 0.5) <= 2.0 * se);
}

TEST_CASE("a batch run writes reports, reruns byte-identically, fails loudly") {
  const fs::path dir = testutil::fresh_dir("cli-batch");
  stage_city(dir, "alpha", 21, 400);
  stage_city(dir, "beta", 22, 400);

  nlohmann::json doc;
  doc["seed"] = 9;
  doc["out_dir"] = "reports";
  doc["p_grid"] = {0.80};
  doc["d_grid"] = {2};
  for (const char* prefix : {"alpha", "beta"}) {
    nlohmann::json city;
    city["name"] = prefix;
    city["weather_csv"] = std::string(prefix) + "_w.csv";
    city["ntl_csv"] = std::string(prefix) + "_n.csv";
    city["k_folds"] = 5;
    city["lasso"] = {{"n_lambda", 20}, {"cv_folds", 4}};
    city["forest"] = {{"n_trees", 40}, {"min_node", 25}};
    doc["cities"].push_back(city);
  }
  heatdml::write_text_file(dir / "run.json", doc.dump(2) + "\n");

  const CliResult first = run_cli("pipeline --config " + q(dir / "run.json"));
  REQUIRE(first.exit_code == 0);
  CHECK(first.out.find("wrote 10 report files") != std::string::npos);
  const fs::path reports = dir / "reports";
  CHECK(fs::exists(reports / "alpha_estimate.csv"));
  CHECK(fs::exists(reports / "beta_estimate.csv"));
  CHECK(fs::exists(reports / "alpha_sweep.csv"));
  CHECK(fs::exists(reports / "beta_event_study.csv"));
  CHECK(fs::exists(reports / "alpha_diagnostics.csv"));
  REQUIRE(fs::exists(reports / "manifest.json"));
  const nlohmann::json manifest =
      nlohmann::json::parse(heatdml::read_text_file(reports / "manifest.json"));
  CHECK(manifest["outputs"].size() == 10);

  const auto before = slurp_all(reports);
  const CliResult second = run_cli("pipeline --config " + q(dir / "run.json"));
  REQUIRE(second.exit_code == 0);
  CHECK(before == slurp_all(reports));

  // Same config with one input renamed away: named failure, no manifest.
  doc["cities"][1]["weather_csv"] = "missing_w.csv";
  doc["out_dir"] = "reports2";
  heatdml::write_text_file(dir / "broken.json", doc.dump(2) + "\n");
  const CliResult broken = run_cli("pipeline --config " + q(dir / "broken.json"));
  CHECK(broken.exit_code == 2);
  CHECK(broken.err.find("missing_w.csv") != std::string::npos);
  CHECK(broken.err.find("beta") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "reports2" / "manifest.json"));
}

TEST_CASE("single-stage commands run end to end") {
  const fs::path dir = testutil::fresh_dir("cli-stages");
  stage_city(dir, "city", 31, 300);

  // Pixel aggregation over a two-pixel table.
  std::string px = "pixel_id,date,raw_radiance,area,quality_flag,is_fill\n";
  px += "p1,2021-01-01,10,1,good_quality,0\n";
  px += "p2,2021-01-01,30,3,good_quality,0\n";
  px += "p1,2021-01-02,20,1,good_quality,0\n";
  px += "p2,2021-01-02,20,3,gap_filled,0\n";
  heatdml::write_text_file(dir / "px.csv", px);
  const CliResult agg = run_cli("aggregate-ntl --pixels " + q(dir / "px.csv") +
                                " --out " + q(dir / "agg.csv"));
  REQUIRE(agg.exit_code == 0);
  const heatdml::CsvTable agg_table = heatdml::read_csv(dir / "agg.csv");
  REQUIRE(agg_table.rows.size() == 2);
  CHECK(heatdml::parse_double(agg_table.rows[0][1], "radiance") == 25.0);

  const CliResult feats = run_cli(
      "features --weather " + q(dir / "city_w.csv") + " --ntl " +
      q(dir / "city_n.csv") + " --out " + q(dir / "feats.csv"));
  REQUIRE(feats.exit_code == 0);
  CHECK(fs::exists(dir / "feats.csv"));

  const CliResult sw = run_cli(
      "sweep --weather " + q(dir / "city_w.csv") + " --ntl " +
      q(dir / "city_n.csv") + " --out " + q(dir / "sweep.csv") +
      " --p-grid 0.8 --d-grid 2 --k 5");
  REQUIRE(sw.exit_code == 0);
  CHECK(heatdml::read_csv(dir / "sweep.csv").rows.size() == 1);

  const CliResult ev = run_cli(
      "event-study --weather " + q(dir / "city_w.csv") + " --ntl " +
      q(dir / "city_n.csv") + " --out " + q(dir / "ev.csv"));
  REQUIRE(ev.exit_code == 0);
  CHECK(heatdml::read_csv(dir / "ev.csv").rows.size() == 8);

  const CliResult dg = run_cli(
      "diagnose --weather " + q(dir / "city_w.csv") + " --ntl " +
      q(dir / "city_n.csv") + " --out " + q(dir / "diag.csv"));
  REQUIRE(dg.exit_code == 0);
  CHECK(heatdml::read_csv(dir / "diag.csv").rows.size() == 4);
}

}  // TEST_SUITE
