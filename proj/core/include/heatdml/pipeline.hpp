#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "heatdml/diagnostics.hpp"
#include "heatdml/run_config.hpp"

namespace heatdml {

// Report writers shared by the batch pipeline and the single-stage CLI, so
// both emit identical bytes for the same inputs.
void write_heatwaves_csv(const std::filesystem::path& path,
                         const HeatwaveSeries& hw,
                         const std::vector<double>& temps);
void write_estimate_csv(const std::filesystem::path& path,
                        const std::string& city, const DmlEstimate& est);
void write_estimate_json(const std::filesystem::path& path,
                         const std::string& city, const DmlEstimate& est);
void write_sweep_csv(const std::filesystem::path& path,
                     const SweepResult& sweep_result);
void write_event_study_csv(const std::filesystem::path& path,
                           const EventStudyResult& ev);
void write_diagnostics_csv(const std::filesystem::path& path,
                           const CityDataset& dataset,
                           const std::vector<double>& temps, int max_lag = 7);

struct PipelineResult {
  std::vector<std::filesystem::path> outputs;  // report files, in write order
  std::filesystem::path manifest;
};

// Runs the configured stages for every city and writes per-city reports under
// config.out_dir: <slug>_heatwaves.csv, <slug>_estimate.{csv,json},
// <slug>_sweep.csv, <slug>_event_study.csv, <slug>_diagnostics.csv. The
// manifest (config hash, seeds, version, output list) is written only after
// every stage succeeded, so its absence marks a partial run. Identical config
// and seed reproduce every file byte for byte.
PipelineResult run_pipeline(const RunConfig& config);

}  // namespace heatdml
