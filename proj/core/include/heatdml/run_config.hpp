#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "heatdml/types.hpp"

namespace heatdml {

// One city to process: its estimation settings plus where its inputs live.
// Exactly one of ntl_csv / pixel_csv is set; a pixel table is aggregated to
// a daily series before the join.
struct CityJob {
  CityConfig config;
  std::filesystem::path weather_csv;
  std::filesystem::path ntl_csv;
  std::filesystem::path pixel_csv;
  double pixel_scale = 1.0;
};

struct RunStages {
  bool estimate = true;
  bool sweep = true;
  bool event_study = true;
  bool diagnostics = true;
};

struct RunConfig {
  std::vector<CityJob> cities;
  std::filesystem::path out_dir = "out";
  std::string format = "csv";  // estimate reports: "csv" or "json"
  std::uint64_t seed = 0;
  int jobs = 1;
  std::vector<double> p_grid = {0.80, 0.85, 0.90};
  std::vector<int> d_grid = {2, 3, 4};
  RunStages stages;
};

// Parses the JSON run description. Relative input paths resolve against
// base_dir (the config file's directory). Unknown keys are rejected so typos
// fail loudly. A city without its own "seed" gets one derived from the run
// seed and its position.
RunConfig parse_run_config(const std::string& text,
                           const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

// Filesystem-safe lowercase city slug used to name per-city reports.
std::string city_slug(const std::string& name);

// Canonical JSON rendering of a fully-resolved config; equal configs hash
// equal regardless of key order or whitespace in the source file.
std::string canonical_config_json(const RunConfig& config);

std::uint64_t fnv1a64(std::string_view text);

}  // namespace heatdml
