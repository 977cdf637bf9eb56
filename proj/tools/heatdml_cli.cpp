// Command-line front end: one `pipeline` batch command plus single-stage
// commands with explicit input/output paths.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "heatdml/csv.hpp"
#include "heatdml/random.hpp"
#include "heatdml/diagnostics.hpp"
#include "heatdml/dml.hpp"
#include "heatdml/errors.hpp"
#include "heatdml/features.hpp"
#include "heatdml/ingest.hpp"
#include "heatdml/ntl_aggregate.hpp"
#include "heatdml/pipeline.hpp"
#include "heatdml/run_config.hpp"
#include "heatdml/stats_tests.hpp"
#include "heatdml/synth.hpp"
#include "heatdml/version.hpp"

namespace {

using namespace heatdml;

CityDataset load_dataset(const std::string& weather_path,
                         const std::string& ntl_path) {
  std::vector<std::string> warnings;
  auto weather = load_weather_csv(weather_path, {}, &warnings);
  auto ntl = load_ntl_csv(ntl_path, &warnings);
  for (const auto& w : warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  return join_on_date(std::move(weather), std::move(ntl));
}

HeatwaveSeries detect_for(const CityDataset& dataset, const std::string& column,
                          double p, int d) {
  std::vector<Date> dates;
  dates.reserve(dataset.weather.size());
  for (const auto& w : dataset.weather) dates.push_back(w.date);
  return detect_heatwaves(dates, threshold_temperatures(dataset.weather, column),
                          p, d);
}

int run(int argc, char** argv) {
  CLI::App app{"Heatwave impact estimation on nighttime-light radiance"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  // pipeline
  auto* cmd_pipeline = app.add_subcommand(
      "pipeline", "Run every configured stage for every city in a config file");
  std::string config_path;
  std::string pipe_out, pipe_format;
  int pipe_jobs = 0;
  std::int64_t pipe_seed = -1;
  cmd_pipeline->add_option("--config", config_path, "JSON run config")
      ->required();
  cmd_pipeline->add_option("--out", pipe_out, "Override the output directory");
  cmd_pipeline->add_option("--jobs", pipe_jobs, "Worker threads (default from config)");
  cmd_pipeline->add_option("--seed", pipe_seed, "Override the run seed")
      ->check(CLI::NonNegativeNumber);
  cmd_pipeline
      ->add_option("--format", pipe_format, "Estimate report format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd_pipeline->callback([&] {
    RunConfig config = load_run_config(config_path);
    if (!pipe_out.empty()) config.out_dir = pipe_out;
    if (pipe_jobs > 0) config.jobs = pipe_jobs;
    if (pipe_seed >= 0) {
      const auto run_seed = static_cast<std::uint64_t>(pipe_seed);
      for (std::size_t i = 0; i < config.cities.size(); ++i) {
        config.cities[i].config.seed = derive_seed(run_seed, i);
      }
      config.seed = run_seed;
    }
    if (!pipe_format.empty()) config.format = pipe_format;
    const PipelineResult result = run_pipeline(config);
    std::printf("wrote %zu report files and %s\n", result.outputs.size(),
                result.manifest.string().c_str());
  });

  // aggregate-ntl
  auto* cmd_aggregate = app.add_subcommand(
      "aggregate-ntl", "Aggregate a pixel table to a daily radiance series");
  std::string agg_pixels, agg_out;
  double agg_scale = 1.0;
  cmd_aggregate->add_option("--pixels", agg_pixels, "Pixel-level CSV")->required();
  cmd_aggregate->add_option("--out", agg_out, "Output daily series CSV")->required();
  cmd_aggregate->add_option("--scale", agg_scale, "Radiance scale factor");
  cmd_aggregate->callback([&] {
    const auto pixels = load_pixel_csv(agg_pixels);
    const AggregateReport report = aggregate_series(pixels, agg_scale);
    for (const auto& w : report.warnings) {
      std::fprintf(stderr, "warning: %s\n", w.c_str());
    }
    write_ntl_csv(agg_out, report.series);
    std::printf("wrote %zu days (%zu skipped) to %s\n", report.series.size(),
                report.skipped_dates, agg_out.c_str());
  });

  // detect-heatwaves
  auto* cmd_detect = app.add_subcommand(
      "detect-heatwaves", "Flag hot days and heatwave episodes in a weather table");
  std::string det_weather, det_out, det_column = "tempavg";
  double det_p = 0.80;
  int det_d = 3;
  cmd_detect->add_option("--weather", det_weather, "Daily weather CSV")->required();
  cmd_detect->add_option("--out", det_out, "Output per-day CSV")->required();
  cmd_detect->add_option("--p", det_p, "Percentile threshold in (0,1)");
  cmd_detect->add_option("--d", det_d, "Minimum consecutive hot days");
  cmd_detect->add_option("--column", det_column, "tempavg or tempmax");
  cmd_detect->callback([&] {
    const auto weather = load_weather_csv(det_weather);
    std::vector<Date> dates;
    dates.reserve(weather.size());
    for (const auto& w : weather) dates.push_back(w.date);
    const auto temps = threshold_temperatures(weather, det_column);
    const HeatwaveSeries hw = detect_heatwaves(dates, temps, det_p, det_d);
    write_heatwaves_csv(det_out, hw, temps);
    std::size_t days = 0;
    for (auto v : hw.heatwave) days += v;
    std::printf("threshold %s, %zu heatwave days, %zu onsets\n",
                format_double(hw.threshold.tau).c_str(), days,
                episode_onsets(hw.heatwave).size());
  });

  // features
  auto* cmd_features = app.add_subcommand(
      "features", "Assemble the confounder/treatment/outcome design table");
  std::string feat_weather, feat_ntl, feat_out, feat_column = "tempavg";
  double feat_p = 0.80, feat_cdd_base = 18.0;
  int feat_d = 3;
  bool feat_no_interactions = false;
  cmd_features->add_option("--weather", feat_weather, "Daily weather CSV")->required();
  cmd_features->add_option("--ntl", feat_ntl, "Daily radiance CSV")->required();
  cmd_features->add_option("--out", feat_out, "Output features CSV")->required();
  cmd_features->add_option("--p", feat_p, "Percentile threshold in (0,1)");
  cmd_features->add_option("--d", feat_d, "Minimum consecutive hot days");
  cmd_features->add_option("--cdd-base", feat_cdd_base, "Cooling degree-day base");
  cmd_features->add_option("--column", feat_column, "tempavg or tempmax");
  cmd_features->add_flag("--no-interactions", feat_no_interactions,
                         "Drop interaction columns");
  cmd_features->callback([&] {
    const CityDataset dataset = load_dataset(feat_weather, feat_ntl);
    CityConfig config;
    config.percentile_p = feat_p;
    config.duration_d = feat_d;
    config.cdd_base = feat_cdd_base;
    config.threshold_column = feat_column;
    config.feature_spec.include_interactions = !feat_no_interactions;
    const HeatwaveSeries hw = detect_for(dataset, feat_column, feat_p, feat_d);
    const FeatureMatrix fm = assemble_design(dataset, hw, config);
    write_features_csv(feat_out, fm);
    std::printf("wrote %zu rows x %zu covariates to %s\n", fm.dates.size(),
                fm.column_names.size(), feat_out.c_str());
  });

  // fit
  auto* cmd_fit = app.add_subcommand(
      "fit", "Estimate the treatment effect from an assembled features table");
  std::string fit_features, fit_out, fit_format = "csv", fit_city = "city";
  int fit_k = 10, fit_jobs = 1, fit_reps = 1;
  std::int64_t fit_seed = 0;
  double fit_p = 0.80;
  int fit_d = 3;
  cmd_fit->add_option("--features", fit_features, "Features CSV from `features`")
      ->required();
  cmd_fit->add_option("--out", fit_out, "Output report path")->required();
  cmd_fit->add_option("--k", fit_k, "Cross-fitting folds");
  cmd_fit->add_option("--seed", fit_seed, "Fold/learner seed")
      ->check(CLI::NonNegativeNumber);
  cmd_fit->add_option("--jobs", fit_jobs, "Worker threads");
  cmd_fit->add_option("--repetitions", fit_reps,
                      "Median over this many split seeds");
  cmd_fit->add_option("--format", fit_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd_fit->add_option("--city", fit_city, "City label for the report");
  cmd_fit->add_option("--p", fit_p, "Percentile label for the report");
  cmd_fit->add_option("--d", fit_d, "Duration label for the report");
  cmd_fit->callback([&] {
    const FeatureMatrix fm = load_features_csv(fit_features);
    CityConfig config;
    config.city_name = fit_city;
    config.percentile_p = fit_p;
    config.duration_d = fit_d;
    config.k_folds = fit_k;
    config.seed = static_cast<std::uint64_t>(fit_seed);
    config.repetitions = fit_reps;
    const DmlEstimate est = run_dml(fm, config, fit_jobs);
    if (fit_format == "json") {
      write_estimate_json(fit_out, fit_city, est);
    } else {
      write_estimate_csv(fit_out, fit_city, est);
    }
    std::printf("theta %s (se %s, p %s)\n", format_double(est.theta).c_str(),
                format_double(est.se).c_str(),
                format_double(est.p_value).c_str());
  });

  // sweep
  auto* cmd_sweep = app.add_subcommand(
      "sweep", "Re-estimate over a grid of episode definitions");
  std::string sw_weather, sw_ntl, sw_out, sw_column = "tempavg";
  std::vector<double> sw_p_grid = {0.80, 0.85, 0.90};
  std::vector<int> sw_d_grid = {2, 3, 4};
  int sw_k = 10, sw_jobs = 1;
  std::int64_t sw_seed = 0;
  cmd_sweep->add_option("--weather", sw_weather, "Daily weather CSV")->required();
  cmd_sweep->add_option("--ntl", sw_ntl, "Daily radiance CSV")->required();
  cmd_sweep->add_option("--out", sw_out, "Output sweep CSV")->required();
  cmd_sweep->add_option("--p-grid", sw_p_grid, "Percentile grid");
  cmd_sweep->add_option("--d-grid", sw_d_grid, "Duration grid");
  cmd_sweep->add_option("--k", sw_k, "Cross-fitting folds");
  cmd_sweep->add_option("--seed", sw_seed, "Base seed")
      ->check(CLI::NonNegativeNumber);
  cmd_sweep->add_option("--jobs", sw_jobs, "Worker threads");
  cmd_sweep->add_option("--column", sw_column, "tempavg or tempmax");
  cmd_sweep->callback([&] {
    const CityDataset dataset = load_dataset(sw_weather, sw_ntl);
    CityConfig config;
    config.k_folds = sw_k;
    config.seed = static_cast<std::uint64_t>(sw_seed);
    config.threshold_column = sw_column;
    const SweepResult result =
        sweep(dataset, sw_p_grid, sw_d_grid, config, sw_jobs);
    write_sweep_csv(sw_out, result);
    std::printf("%zu cells", result.cells.size());
    if (result.chosen) {
      const SweepCell& cell = result.cells[*result.chosen];
      std::printf(", chosen p=%s d=%d", format_double(cell.p).c_str(), cell.d);
    }
    std::printf("\n");
  });

  // event-study
  auto* cmd_event = app.add_subcommand(
      "event-study", "Log-radiance deviations around episode onsets");
  std::string ev_weather, ev_ntl, ev_out, ev_column = "tempavg";
  double ev_p = 0.80;
  int ev_d = 3, ev_pre = 2, ev_post = 5;
  cmd_event->add_option("--weather", ev_weather, "Daily weather CSV")->required();
  cmd_event->add_option("--ntl", ev_ntl, "Daily radiance CSV")->required();
  cmd_event->add_option("--out", ev_out, "Output event-study CSV")->required();
  cmd_event->add_option("--p", ev_p, "Percentile threshold in (0,1)");
  cmd_event->add_option("--d", ev_d, "Minimum consecutive hot days");
  cmd_event->add_option("--pre", ev_pre, "Days before onset");
  cmd_event->add_option("--post", ev_post, "Days after onset");
  cmd_event->add_option("--column", ev_column, "tempavg or tempmax");
  cmd_event->callback([&] {
    const CityDataset dataset = load_dataset(ev_weather, ev_ntl);
    const HeatwaveSeries hw = detect_for(dataset, ev_column, ev_p, ev_d);
    const EventStudyResult result = event_study(dataset, hw, ev_pre, ev_post);
    write_event_study_csv(ev_out, result);
    std::printf("%zu events (%zu overlap-excluded, %zu incomplete)\n",
                result.n_events, result.excluded_overlap,
                result.excluded_incomplete);
  });

  // diagnose
  auto* cmd_diagnose = app.add_subcommand(
      "diagnose", "Stationarity and temporal-association tests");
  std::string dg_weather, dg_ntl, dg_out, dg_column = "tempavg";
  int dg_max_lag = 7;
  cmd_diagnose->add_option("--weather", dg_weather, "Daily weather CSV")->required();
  cmd_diagnose->add_option("--ntl", dg_ntl, "Daily radiance CSV")->required();
  cmd_diagnose->add_option("--out", dg_out, "Output diagnostics CSV")->required();
  cmd_diagnose->add_option("--max-lag", dg_max_lag, "Granger lag bound");
  cmd_diagnose->add_option("--column", dg_column, "tempavg or tempmax");
  cmd_diagnose->callback([&] {
    const CityDataset dataset = load_dataset(dg_weather, dg_ntl);
    const auto temps = threshold_temperatures(dataset.weather, dg_column);
    write_diagnostics_csv(dg_out, dataset, temps, dg_max_lag);
    std::printf("wrote %s\n", dg_out.c_str());
  });

  // synth
  auto* cmd_synth = app.add_subcommand(
      "synth", "Write a synthetic weather/radiance pair with known effect");
  std::string sy_weather, sy_ntl, sy_features, sy_nonlin = "linear";
  std::size_t sy_n = 2000;
  double sy_theta = 0.5, sy_conf = 1.2, sy_noise = 1.5;
  std::int64_t sy_seed = 0;
  cmd_synth->add_option("--out-weather", sy_weather, "Output weather CSV")
      ->required();
  cmd_synth->add_option("--out-ntl", sy_ntl, "Output radiance CSV")->required();
  cmd_synth->add_option("--out-features", sy_features,
                        "Also write the generating design table, including the "
                        "true treatment column, ready for `fit`");
  cmd_synth->add_option("--n", sy_n, "Days to generate");
  cmd_synth->add_option("--theta", sy_theta, "True effect in log points");
  cmd_synth->add_option("--confounding", sy_conf, "Confounding strength");
  cmd_synth->add_option("--noise", sy_noise, "Outcome noise SD");
  cmd_synth->add_option("--seed", sy_seed, "Generator seed")
      ->check(CLI::NonNegativeNumber);
  cmd_synth
      ->add_option("--nonlinearity", sy_nonlin, "linear, quadratic or interaction")
      ->check(CLI::IsMember({"linear", "quadratic", "interaction"}));
  cmd_synth->callback([&] {
    SynthConfig config;
    config.n_days = sy_n;
    config.true_theta = sy_theta;
    config.confounding_strength = sy_conf;
    config.noise_sd = sy_noise;
    config.seed = static_cast<std::uint64_t>(sy_seed);
    if (sy_nonlin == "quadratic") config.nonlinearity = Nonlinearity::quadratic;
    if (sy_nonlin == "interaction") {
      config.nonlinearity = Nonlinearity::interaction;
    }
    const SynthData data = generate_synthetic(config);
    write_weather_csv(sy_weather, data.weather);
    write_ntl_csv(sy_ntl, data.ntl);
    if (!sy_features.empty()) write_features_csv(sy_features, data.fm);
    std::printf("wrote %zu days, true theta %s\n", data.weather.size(),
                format_double(data.true_theta).c_str());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage problems are validation errors (exit 1); --help/--version exit 0.
    return app.exit(e) == 0 ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const heatdml::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const heatdml::SchemaError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const heatdml::ArgumentError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
