#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "heatdml/types.hpp"

namespace heatdml {

struct WeatherApiOptions {
  // Falls back to the HEATDML_API_URL environment variable when empty.
  std::string base_url;
  // Responses are cached here keyed by (city, start, end); a cached payload
  // is replayed byte-identically without touching the network.
  std::filesystem::path cache_dir = ".weather_cache";
  int timeout_seconds = 30;
};

// Fetches one contiguous block of daily weather for a city. The credential
// falls back to HEATDML_API_KEY when the argument is empty. Auth failures,
// rate limiting, malformed payloads and gappy date ranges all surface as
// ApiError.
std::vector<DailyWeather> fetch_weather(const std::string& city,
                                        const Date& start, const Date& end,
                                        const std::string& credential = {},
                                        const WeatherApiOptions& options = {});

}  // namespace heatdml
