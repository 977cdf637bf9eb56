#include "heatdml/diagnostics.hpp"

#include <cmath>

#include "heatdml/errors.hpp"
#include "heatdml/features.hpp"
#include "heatdml/random.hpp"

namespace heatdml {

std::vector<double> threshold_temperatures(
    const std::vector<DailyWeather>& weather, const std::string& column) {
  std::vector<double> temps;
  temps.reserve(weather.size());
  if (column == "tempavg") {
    for (const auto& w : weather) temps.push_back(w.temp_avg);
  } else if (column == "tempmax") {
    for (const auto& w : weather) temps.push_back(w.temp_max);
  } else {
    throw ArgumentError("unknown threshold column '" + column + "'");
  }
  return temps;
}

SweepResult sweep(const CityDataset& dataset, const std::vector<double>& p_grid,
                  const std::vector<int>& d_grid, const CityConfig& base,
                  int jobs) {
  if (p_grid.empty() || d_grid.empty()) {
    throw ArgumentError("sweep grids must be non-empty");
  }
  std::vector<Date> dates;
  dates.reserve(dataset.weather.size());
  for (const auto& w : dataset.weather) dates.push_back(w.date);
  const std::vector<double> temps =
      threshold_temperatures(dataset.weather, base.threshold_column);

  SweepResult result;
  result.cells.reserve(p_grid.size() * d_grid.size());
  std::size_t index = 0;
  for (double p : p_grid) {
    for (int d : d_grid) {
      SweepCell cell;
      cell.p = p;
      cell.d = d;
      CityConfig config = base;
      config.percentile_p = p;
      config.duration_d = d;
      config.seed = derive_seed(base.seed, 7000 + index);
      ++index;
      try {
        const HeatwaveSeries hw = detect_heatwaves(dates, temps, p, d);
        const FeatureMatrix fm = assemble_design(dataset, hw, config);
        const double treated = fm.D.sum();
        if (treated < static_cast<double>(config.k_folds)) {
          cell.flag = "insufficient treated sample";
        } else {
          cell.estimate = run_dml(fm, config, jobs);
        }
      } catch (const DegeneracyError& e) {
        cell.flag = e.what();
      }
      result.cells.push_back(std::move(cell));
    }
  }

  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    const auto& est = result.cells[i].estimate;
    if (!est || !(est->p_value < 0.05)) continue;
    if (!result.chosen ||
        est->se < result.cells[*result.chosen].estimate->se) {
      result.chosen = i;
    }
  }
  return result;
}

EventStudyResult event_study(const CityDataset& dataset,
                             const HeatwaveSeries& hw, int pre, int post) {
  if (pre < 1 || post < 0) {
    throw ArgumentError("event window must reach at least one day back");
  }
  const std::size_t n = dataset.ntl.size();
  if (hw.heatwave.size() != n || dataset.weather.size() != n) {
    throw ValidationError("episode series does not align with the dataset");
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (hw.dates[t] != dataset.ntl[t].date) {
      throw ValidationError("episode series does not align with the dataset");
    }
  }

  std::vector<double> ln_ntl(n);
  for (std::size_t t = 0; t < n; ++t) {
    if (!(dataset.ntl[t].radiance > 0.0)) {
      throw ValidationError("radiance must be positive on " +
                            dataset.ntl[t].date.iso());
    }
    ln_ntl[t] = std::log(dataset.ntl[t].radiance);
  }

  const auto window = static_cast<std::size_t>(pre + post);
  EventStudyResult result;
  for (int o = -pre; o <= post; ++o) result.offsets.push_back(o);
  const std::size_t width = result.offsets.size();

  std::vector<std::vector<double>> deviations(width);
  bool have_prior = false;
  std::size_t prior_onset = 0;
  for (std::size_t t : episode_onsets(hw.heatwave)) {
    if (t < static_cast<std::size_t>(pre) ||
        t + static_cast<std::size_t>(post) >= n) {
      ++result.excluded_incomplete;
      continue;
    }
    if (have_prior && t - prior_onset <= window) {
      ++result.excluded_overlap;
      continue;
    }
    have_prior = true;
    prior_onset = t;

    double baseline = 0.0;
    for (int b = 1; b <= pre; ++b) {
      baseline += ln_ntl[t - static_cast<std::size_t>(b)];
    }
    baseline /= static_cast<double>(pre);
    for (std::size_t k = 0; k < width; ++k) {
      const auto idx = static_cast<std::size_t>(
          static_cast<std::ptrdiff_t>(t) + result.offsets[k]);
      deviations[k].push_back(ln_ntl[idx] - baseline);
    }
    ++result.n_events;
  }

  if (result.n_events == 0) {
    throw ValidationError("no complete episode windows in the sample");
  }

  const double z95 = 1.959963984540054;
  result.effect.resize(width);
  result.ci_low.resize(width);
  result.ci_high.resize(width);
  const double m = static_cast<double>(result.n_events);
  for (std::size_t k = 0; k < width; ++k) {
    double mean = 0.0;
    for (double v : deviations[k]) mean += v;
    mean /= m;
    result.effect[k] = mean;
    if (result.n_events < 2) {
      result.ci_low[k] = mean;
      result.ci_high[k] = mean;
      continue;
    }
    double ss = 0.0;
    for (double v : deviations[k]) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (m - 1.0));
    const double half = z95 * sd / std::sqrt(m);
    result.ci_low[k] = mean - half;
    result.ci_high[k] = mean + half;
  }
  return result;
}

}  // namespace heatdml
