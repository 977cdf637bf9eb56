#pragma once

#include <cstdint>
#include <vector>

#include "heatdml/features.hpp"
#include "heatdml/types.hpp"

namespace heatdml {

// Optional departures from a linear outcome surface, used to probe whether
// the flexible learners still recover the treatment effect.
enum class Nonlinearity { linear, quadratic, interaction };

struct SynthConfig {
  std::size_t n_days = 2000;
  double true_theta = 0.5;
  double confounding_strength = 1.2;
  Nonlinearity nonlinearity = Nonlinearity::linear;
  double noise_sd = 1.5;
  std::uint64_t seed = 0;
  bool enforce_positivity = true;  // clip propensities into [0.05, 0.95]
};

// A synthetic city: weather drawn around a slow-moving climate factor,
// a binary treatment whose propensity depends on that weather, and a
// log-radiance outcome with a known additive treatment effect.
struct SynthData {
  FeatureMatrix fm;  // eight raw weather columns, binary D, outcome Y
  double true_theta = 0.0;
  std::vector<DailyWeather> weather;
  std::vector<NtlDaily> ntl;  // radiance = exp(Y), so log-radiance equals Y
};

SynthData generate_synthetic(const SynthConfig& config);

// Exhaustive window-scan count of in-heatwave days: day t counts when the
// d-day window ending at t is all hot. Equals the total of the run-length
// detector's indicator, but written independently so the two can check each
// other.
std::size_t brute_force_heatwave_count(const std::vector<double>& temps,
                                       double percentile_p, int duration_d);

}  // namespace heatdml
