#include "heatdml/pipeline.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <json.hpp>

#include "heatdml/csv.hpp"
#include "heatdml/diagnostics.hpp"
#include "heatdml/errors.hpp"
#include "heatdml/features.hpp"
#include "heatdml/ingest.hpp"
#include "heatdml/ntl_aggregate.hpp"
#include "heatdml/stats_tests.hpp"
#include "heatdml/version.hpp"

namespace heatdml {

namespace {

template <typename Fn>
auto with_city_context(const std::string& city, Fn&& fn) {
  try {
    return fn();
  } catch (const SchemaError& e) {
    throw SchemaError("city '" + city + "': " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError("city '" + city + "': " + e.what());
  } catch (const DegeneracyError& e) {
    throw DegeneracyError("city '" + city + "': " + e.what());
  } catch (const ArgumentError& e) {
    throw ArgumentError("city '" + city + "': " + e.what());
  } catch (const IoError& e) {
    throw IoError("city '" + city + "': " + e.what());
  }
}

std::string hex64(std::uint64_t v) {
  static const char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

}  // namespace

void write_heatwaves_csv(const std::filesystem::path& path,
                         const HeatwaveSeries& hw,
                         const std::vector<double>& temps) {
  std::string text = "date,temp_used,hot_day,heatwave,onset\n";
  std::vector<std::uint8_t> onset(hw.heatwave.size(), 0);
  for (std::size_t t : episode_onsets(hw.heatwave)) onset[t] = 1;
  for (std::size_t i = 0; i < hw.dates.size(); ++i) {
    append_csv_line(text, {hw.dates[i].iso(), format_double(temps[i]),
                           std::to_string(int(hw.hot_day[i])),
                           std::to_string(int(hw.heatwave[i])),
                           std::to_string(int(onset[i]))});
  }
  write_text_file(path, text);
}

void write_estimate_csv(const std::filesystem::path& path,
                        const std::string& city, const DmlEstimate& est) {
  std::string text = "city,p,d,theta,se,z,p_value,pct_change,n,K,seed\n";
  append_csv_line(
      text, {city, format_double(est.p), std::to_string(est.d),
             format_double(est.theta), format_double(est.se),
             format_double(est.z), format_double(est.p_value),
             format_double(est.pct_change), std::to_string(est.n),
             std::to_string(est.K), std::to_string(est.seed)});
  write_text_file(path, text);
}

void write_estimate_json(const std::filesystem::path& path,
                         const std::string& city, const DmlEstimate& est) {
  nlohmann::json doc;
  doc["city"] = city;
  doc["p"] = est.p;
  doc["d"] = est.d;
  doc["theta"] = est.theta;
  doc["se"] = est.se;
  doc["z"] = est.z;
  doc["p_value"] = est.p_value;
  doc["pct_change"] = est.pct_change;
  doc["n"] = est.n;
  doc["K"] = est.K;
  doc["seed"] = est.seed;
  write_text_file(path, doc.dump(2) + "\n");
}

void write_sweep_csv(const std::filesystem::path& path,
                     const SweepResult& sweep_result) {
  std::string text = "p,d,theta,se,z,p_value,pct_change,n,flag,chosen\n";
  for (std::size_t i = 0; i < sweep_result.cells.size(); ++i) {
    const SweepCell& cell = sweep_result.cells[i];
    const bool chosen =
        sweep_result.chosen && *sweep_result.chosen == i;
    if (cell.estimate) {
      const DmlEstimate& est = *cell.estimate;
      append_csv_line(text,
                      {format_double(cell.p), std::to_string(cell.d),
                       format_double(est.theta), format_double(est.se),
                       format_double(est.z), format_double(est.p_value),
                       format_double(est.pct_change), std::to_string(est.n),
                       "", chosen ? "1" : "0"});
    } else {
      append_csv_line(text, {format_double(cell.p), std::to_string(cell.d), "",
                             "", "", "", "", "", cell.flag, "0"});
    }
  }
  write_text_file(path, text);
}

void write_event_study_csv(const std::filesystem::path& path,
                           const EventStudyResult& ev) {
  std::string text = "offset,effect,ci_low,ci_high,n_events\n";
  for (std::size_t k = 0; k < ev.offsets.size(); ++k) {
    append_csv_line(text, {std::to_string(ev.offsets[k]),
                           format_double(ev.effect[k]),
                           format_double(ev.ci_low[k]),
                           format_double(ev.ci_high[k]),
                           std::to_string(ev.n_events)});
  }
  write_text_file(path, text);
}

void write_diagnostics_csv(const std::filesystem::path& path,
                           const CityDataset& dataset,
                           const std::vector<double>& temps, int max_lag) {
  std::vector<double> ln_ntl;
  ln_ntl.reserve(dataset.ntl.size());
  for (const auto& row : dataset.ntl) ln_ntl.push_back(std::log(row.radiance));

  std::string text = "test,series,statistic,p_value,lag\n";
  const AdfResult adf_ntl = adf_test(ln_ntl);
  append_csv_line(text, {"adf", "ln_ntl", format_double(adf_ntl.statistic),
                         format_double(adf_ntl.p_value),
                         std::to_string(adf_ntl.lags_used)});
  const AdfResult adf_temp = adf_test(temps);
  append_csv_line(text, {"adf", "temperature", format_double(adf_temp.statistic),
                         format_double(adf_temp.p_value),
                         std::to_string(adf_temp.lags_used)});
  const GrangerResult g_fwd = granger_test(temps, ln_ntl, max_lag);
  append_csv_line(text, {"granger", "temperature_to_ln_ntl",
                         format_double(g_fwd.f_statistic),
                         format_double(g_fwd.p_value),
                         std::to_string(g_fwd.lag_used)});
  const GrangerResult g_rev = granger_test(ln_ntl, temps, max_lag);
  append_csv_line(text, {"granger", "ln_ntl_to_temperature",
                         format_double(g_rev.f_statistic),
                         format_double(g_rev.p_value),
                         std::to_string(g_rev.lag_used)});
  write_text_file(path, text);
}

PipelineResult run_pipeline(const RunConfig& config) {
  std::filesystem::create_directories(config.out_dir);

  PipelineResult result;
  nlohmann::json manifest_cities = nlohmann::json::array();

  for (const CityJob& job : config.cities) {
    const std::string& city = job.config.city_name;
    const std::string slug = city_slug(city);
    with_city_context(city, [&] {
      std::vector<DailyWeather> weather = load_weather_csv(job.weather_csv);
      std::vector<NtlDaily> ntl;
      if (!job.ntl_csv.empty()) {
        ntl = load_ntl_csv(job.ntl_csv);
      } else {
        const auto pixels = load_pixel_csv(job.pixel_csv);
        ntl = aggregate_series(pixels, job.pixel_scale).series;
      }
      const CityDataset dataset =
          join_on_date(std::move(weather), std::move(ntl));

      std::vector<Date> dates;
      dates.reserve(dataset.weather.size());
      for (const auto& w : dataset.weather) dates.push_back(w.date);
      const std::vector<double> temps =
          threshold_temperatures(dataset.weather, job.config.threshold_column);
      const HeatwaveSeries hw = detect_heatwaves(
          dates, temps, job.config.percentile_p, job.config.duration_d);

      auto emit = [&](const std::string& name) {
        result.outputs.push_back(config.out_dir / name);
        return result.outputs.back();
      };

      write_heatwaves_csv(emit(slug + "_heatwaves.csv"), hw, temps);

      if (config.stages.estimate) {
        const FeatureMatrix fm = assemble_design(dataset, hw, job.config);
        const DmlEstimate est = run_dml(fm, job.config, config.jobs);
        if (config.format == "json") {
          write_estimate_json(emit(slug + "_estimate.json"), city, est);
        } else {
          write_estimate_csv(emit(slug + "_estimate.csv"), city, est);
        }
      }
      if (config.stages.sweep) {
        const SweepResult sw =
            sweep(dataset, config.p_grid, config.d_grid, job.config,
                  config.jobs);
        write_sweep_csv(emit(slug + "_sweep.csv"), sw);
      }
      if (config.stages.event_study) {
        const EventStudyResult ev = event_study(dataset, hw, 2, 5);
        write_event_study_csv(emit(slug + "_event_study.csv"), ev);
      }
      if (config.stages.diagnostics) {
        write_diagnostics_csv(emit(slug + "_diagnostics.csv"), dataset, temps);
      }
    });
    manifest_cities.push_back(
        {{"name", city}, {"slug", slug}, {"seed", job.config.seed}});
  }

  nlohmann::json manifest;
  manifest["version"] = kVersion;
  manifest["config_hash"] = "fnv1a64:" + hex64(fnv1a64(canonical_config_json(config)));
  manifest["seed"] = config.seed;
  manifest["jobs"] = config.jobs;
  manifest["cities"] = std::move(manifest_cities);
  manifest["outputs"] = nlohmann::json::array();
  for (const auto& path : result.outputs) {
    manifest["outputs"].push_back(path.filename().generic_string());
  }
  result.manifest = config.out_dir / "manifest.json";
  write_text_file(result.manifest, manifest.dump(2) + "\n");
  return result;
}

}  // namespace heatdml
