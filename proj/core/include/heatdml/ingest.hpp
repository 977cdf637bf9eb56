#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "heatdml/types.hpp"

namespace heatdml {

// Maps logical weather fields to CSV column names; defaults to the canonical
// header date,tempmax,tempavg,humidity,dew,cloudcover,precip,windspeed,
// solarenergy[,cdd].
struct WeatherSchema {
  std::string date = "date";
  std::string tempmax = "tempmax";
  std::string tempavg = "tempavg";
  std::string humidity = "humidity";
  std::string dew = "dew";
  std::string cloudcover = "cloudcover";
  std::string precip = "precip";
  std::string windspeed = "windspeed";
  std::string solarenergy = "solarenergy";
  std::string cdd = "cdd";  // optional column
};

// Loads and validates daily weather rows, sorted by date. Rows with an empty
// required cell are dropped and reported through `warnings`; unparseable
// cells and invariant violations throw. Duplicate dates throw.
std::vector<DailyWeather> load_weather_csv(
    const std::filesystem::path& path, const WeatherSchema& schema = {},
    std::vector<std::string>* warnings = nullptr);

// Same contract for the radiance series (columns date,radiance,gap_fraction).
std::vector<NtlDaily> load_ntl_csv(const std::filesystem::path& path,
                                   std::vector<std::string>* warnings = nullptr);

// Inner join on date; drop counts land in the dataset. Throws when the
// intersection is empty.
CityDataset join_on_date(std::vector<DailyWeather> weather,
                         std::vector<NtlDaily> ntl);

void write_weather_csv(const std::filesystem::path& path,
                       const std::vector<DailyWeather>& rows);
void write_ntl_csv(const std::filesystem::path& path,
                   const std::vector<NtlDaily>& rows);

namespace detail {

// Shared row validation (also applied to API responses).
void validate_weather_row(const DailyWeather& row, const std::string& where);
void validate_ntl_row(const NtlDaily& row, const std::string& where);

}  // namespace detail

}  // namespace heatdml
