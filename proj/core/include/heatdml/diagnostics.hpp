#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "heatdml/dml.hpp"
#include "heatdml/heatwave.hpp"
#include "heatdml/types.hpp"

namespace heatdml {

// Temperature series the episode threshold applies to ("tempavg" or
// "tempmax").
std::vector<double> threshold_temperatures(
    const std::vector<DailyWeather>& weather, const std::string& column);

// One (percentile, duration) cell of a robustness sweep. `flag` is empty when
// the cell produced an estimate; otherwise it says why the cell was skipped.
struct SweepCell {
  double p = 0.0;
  int d = 0;
  std::optional<DmlEstimate> estimate;
  std::string flag;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // row-major over p_grid x d_grid
  // Index of the preferred cell: smallest standard error among cells whose
  // effect is significant at the 5% level. Empty when no cell qualifies.
  std::optional<std::size_t> chosen;
};

// Re-runs detection and estimation over a grid of episode definitions. Cells
// with fewer treated days than folds are flagged rather than estimated, as
// are cells whose treatment the covariates explain completely.
SweepResult sweep(const CityDataset& dataset, const std::vector<double>& p_grid,
                  const std::vector<int>& d_grid, const CityConfig& base,
                  int jobs = 1);

// Mean log-radiance deviation from the pre-episode baseline, by day offset
// relative to episode onset.
struct EventStudyResult {
  std::vector<int> offsets;  // -pre .. post
  std::vector<double> effect;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  std::size_t n_events = 0;
  std::size_t excluded_overlap = 0;    // window touched an earlier kept event
  std::size_t excluded_incomplete = 0;  // window ran off the sample edge
};

// Baseline per event: mean log radiance over the `pre` days before onset.
// Confidence bands are normal-approximation 95% over events; with a single
// event they collapse to the point estimate.
EventStudyResult event_study(const CityDataset& dataset,
                             const HeatwaveSeries& hw, int pre = 2,
                             int post = 5);

}  // namespace heatdml
