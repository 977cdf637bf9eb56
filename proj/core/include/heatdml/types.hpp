#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heatdml/calendar.hpp"
#include "heatdml/learners.hpp"

namespace heatdml {

// One city-day of climate observables. cdd is empty until derived (or loaded
// from a file that carries it).
struct DailyWeather {
  Date date;
  double temp_max = 0.0;     // °C
  double temp_avg = 0.0;     // °C
  double humidity = 0.0;     // percent, [0, 100]
  double dew = 0.0;          // °C, <= temp_max
  double cloudcover = 0.0;   // percent, [0, 100]
  double precip = 0.0;       // mm, >= 0
  double windspeed = 0.0;    // km/h, >= 0
  double solarenergy = 0.0;  // kWh/m², >= 0
  std::optional<double> cdd;  // °C·day, >= 0
};

// One city-day of area-weighted radiance.
struct NtlDaily {
  Date date;
  double radiance = 0.0;      // nW/cm²/sr, > 0 (log is taken downstream)
  double gap_fraction = 0.0;  // share of gap-filled pixels, [0, 1]
};

// Declarative design-matrix recipe: base weather columns, lagged copies and
// pairwise products. Interactions may reference "heatwave" (the treatment).
struct FeatureSpec {
  std::vector<std::string> base;
  std::vector<std::pair<std::string, int>> lags;
  std::vector<std::pair<std::string, std::string>> interactions;
  bool include_interactions = true;

  // The default confounder set: cdd, tempmax, humidity, dew, cloudcover,
  // precip, windspeed, solarenergy; cdd lags 1..3, humidity lag 1, tempavg
  // lags 1..2; heatwave×humidity, heatwave×solarenergy, tempmax×cloudcover.
  static FeatureSpec defaults();
};

struct CityConfig {
  std::string city_name;
  double percentile_p = 0.80;  // in (0, 1)
  int duration_d = 3;          // >= 1 consecutive hot days
  double cdd_base = 18.0;      // °C
  int k_folds = 10;
  std::uint64_t seed = 0;
  int repetitions = 1;  // >1: median over seed repetitions
  // Temperature column the threshold applies to: "tempavg" or "tempmax".
  std::string threshold_column = "tempavg";
  FeatureSpec feature_spec = FeatureSpec::defaults();
  NuisanceConfig nuisance;
};

// Weather and radiance joined on date; both vectors share the same dates in
// the same order. Immutable after load.
struct CityDataset {
  std::vector<DailyWeather> weather;
  std::vector<NtlDaily> ntl;
  Date start;
  Date end;
  std::size_t dropped_weather = 0;
  std::size_t dropped_ntl = 0;
};

}  // namespace heatdml
