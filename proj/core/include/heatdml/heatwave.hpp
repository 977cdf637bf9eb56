#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "heatdml/calendar.hpp"

namespace heatdml {

struct Threshold {
  double tau = 0.0;          // °C; always within [min, max] of the sample
  double percentile_p = 0.0;
  std::size_t n_support = 0;  // days the quantile was computed from
};

// Empirical quantile with linear interpolation between order statistics
// (1-based index 1 + p·(n-1) on the sorted sample).
Threshold percentile_threshold(const std::vector<double>& temps, double p);

// I_t = 1 iff T_t >= tau; ties at the threshold count as hot.
std::vector<std::uint8_t> hot_day_indicator(const std::vector<double>& temps,
                                            double tau);

// HW_t = 1 iff the trailing window of d days ending at t is all hot. The
// first d-1 positions have no full in-sample window and stay 0.
std::vector<std::uint8_t> heatwave_indicator(
    const std::vector<std::uint8_t>& hot_day, int d);

// Indices t with hw[t] = 1 and (t = 0 or hw[t-1] = 0).
std::vector<std::size_t> episode_onsets(const std::vector<std::uint8_t>& hw);

struct HeatwaveSeries {
  std::vector<Date> dates;
  std::vector<std::uint8_t> hot_day;
  std::vector<std::uint8_t> heatwave;
  double percentile_p = 0.0;
  int duration_d = 0;
  Threshold threshold;
};

// Threshold + indicators in one step for a dated temperature series.
HeatwaveSeries detect_heatwaves(const std::vector<Date>& dates,
                                const std::vector<double>& temps, double p,
                                int d);

}  // namespace heatdml
