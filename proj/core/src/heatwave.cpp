#include "heatdml/heatwave.hpp"

#include <algorithm>
#include <cmath>

#include "heatdml/errors.hpp"

namespace heatdml {

Threshold percentile_threshold(const std::vector<double>& temps, double p) {
  if (temps.empty()) throw ArgumentError("percentile of an empty sample");
  if (!(p > 0.0 && p < 1.0)) {
    throw ArgumentError("percentile p must be in (0, 1)");
  }
  std::vector<double> sorted = temps;
  std::sort(sorted.begin(), sorted.end());
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  double tau = sorted[lo];
  if (frac > 0.0 && lo + 1 < sorted.size()) {
    tau += frac * (sorted[lo + 1] - sorted[lo]);
  }
  return Threshold{tau, p, temps.size()};
}

std::vector<std::uint8_t> hot_day_indicator(const std::vector<double>& temps,
                                            double tau) {
  if (!std::isfinite(tau)) throw ArgumentError("threshold must be finite");
  std::vector<std::uint8_t> hot(temps.size());
  for (std::size_t t = 0; t < temps.size(); ++t) {
    hot[t] = temps[t] >= tau ? 1 : 0;
  }
  return hot;
}

std::vector<std::uint8_t> heatwave_indicator(
    const std::vector<std::uint8_t>& hot_day, int d) {
  if (d < 1) throw ArgumentError("duration d must be >= 1");
  std::vector<std::uint8_t> hw(hot_day.size(), 0);
  std::size_t run = 0;
  for (std::size_t t = 0; t < hot_day.size(); ++t) {
    if (hot_day[t] > 1) throw ArgumentError("hot_day must be 0/1-valued");
    run = hot_day[t] ? run + 1 : 0;
    hw[t] = run >= static_cast<std::size_t>(d) ? 1 : 0;
  }
  return hw;
}

std::vector<std::size_t> episode_onsets(const std::vector<std::uint8_t>& hw) {
  std::vector<std::size_t> onsets;
  for (std::size_t t = 0; t < hw.size(); ++t) {
    if (hw[t] > 1) throw ArgumentError("heatwave series must be 0/1-valued");
    if (hw[t] == 1 && (t == 0 || hw[t - 1] == 0)) onsets.push_back(t);
  }
  return onsets;
}

HeatwaveSeries detect_heatwaves(const std::vector<Date>& dates,
                                const std::vector<double>& temps, double p,
                                int d) {
  if (dates.size() != temps.size()) {
    throw ArgumentError("dates and temps must have the same length");
  }
  HeatwaveSeries series;
  series.dates = dates;
  series.percentile_p = p;
  series.duration_d = d;
  series.threshold = percentile_threshold(temps, p);
  series.hot_day = hot_day_indicator(temps, series.threshold.tau);
  series.heatwave = heatwave_indicator(series.hot_day, d);
  return series;
}

}  // namespace heatdml
