#include "heatdml/weather_api.hpp"

#include <cstdlib>
#include <filesystem>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "heatdml/csv.hpp"
#include "heatdml/errors.hpp"
#include "heatdml/ingest.hpp"

namespace heatdml {

namespace {

std::string env_or(const char* name, std::string fallback) {
  const char* value = std::getenv(name);
  return value && *value ? std::string(value) : std::move(fallback);
}

std::string cache_key(const std::string& city, const Date& start,
                      const Date& end) {
  std::string key;
  key.reserve(city.size() + 24);
  for (char c : city) {
    const bool safe = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '_' || c == '-';
    key.push_back(safe ? c : '-');
  }
  return key + "_" + start.iso() + "_" + end.iso() + ".json";
}

double number_field(const nlohmann::json& day, const char* field) {
  const auto it = day.find(field);
  if (it == day.end() || !it->is_number()) {
    throw ApiError(std::string("malformed payload: missing number '") + field +
                   "'");
  }
  return it->get<double>();
}

std::vector<DailyWeather> parse_payload(const std::string& body,
                                        const Date& start, const Date& end) {
  const nlohmann::json doc = nlohmann::json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ApiError("malformed payload: not a JSON object");
  }
  const auto days_it = doc.find("days");
  if (days_it == doc.end() || !days_it->is_array()) {
    throw ApiError("malformed payload: no 'days' array");
  }

  std::vector<DailyWeather> rows;
  rows.reserve(days_it->size());
  for (const auto& day : *days_it) {
    if (!day.is_object()) throw ApiError("malformed payload: day not an object");
    const auto dt = day.find("datetime");
    if (dt == day.end() || !dt->is_string()) {
      throw ApiError("malformed payload: missing 'datetime'");
    }
    DailyWeather row;
    try {
      row.date = Date::parse(dt->get<std::string>());
    } catch (const ValidationError& e) {
      throw ApiError(std::string("malformed payload: ") + e.what());
    }
    row.temp_max = number_field(day, "tempmax");
    row.temp_avg = number_field(day, "temp");
    row.humidity = number_field(day, "humidity");
    row.dew = number_field(day, "dew");
    row.cloudcover = number_field(day, "cloudcover");
    row.precip = number_field(day, "precip");
    row.windspeed = number_field(day, "windspeed");
    row.solarenergy = number_field(day, "solarenergy");
    try {
      detail::validate_weather_row(row, "day " + row.date.iso());
    } catch (const ValidationError& e) {
      throw ApiError(std::string("invalid weather payload: ") + e.what());
    }
    rows.push_back(row);
  }

  if (rows.empty()) throw ApiError("weather service returned no days");
  if (rows.front().date != start || rows.back().date != end) {
    throw ApiError("weather service returned a different date range");
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].date.serial() != rows[i - 1].date.serial() + 1) {
      throw ApiError("weather service returned a gappy date range");
    }
  }
  return rows;
}

}  // namespace

std::vector<DailyWeather> fetch_weather(const std::string& city,
                                        const Date& start, const Date& end,
                                        const std::string& credential,
                                        const WeatherApiOptions& options) {
  if (city.empty()) throw ArgumentError("city must be non-empty");
  if (end < start) throw ArgumentError("end date precedes start date");
  const std::string key =
      credential.empty() ? env_or("HEATDML_API_KEY", "") : credential;
  if (key.empty()) {
    throw ArgumentError("no API credential given and HEATDML_API_KEY unset");
  }

  const std::filesystem::path cache_file =
      options.cache_dir / cache_key(city, start, end);
  if (std::filesystem::exists(cache_file)) {
    return parse_payload(read_text_file(cache_file), start, end);
  }

  const std::string base_url =
      options.base_url.empty() ? env_or("HEATDML_API_URL", "")
                               : options.base_url;
  if (base_url.empty()) {
    throw ArgumentError("no API base url given and HEATDML_API_URL unset");
  }

  httplib::Client client(base_url);
  client.set_connection_timeout(options.timeout_seconds, 0);
  client.set_read_timeout(options.timeout_seconds, 0);
  const std::string path = "/v1/daily?city=" +
                           httplib::detail::encode_query_param(city) +
                           "&start=" + start.iso() + "&end=" + end.iso();
  const httplib::Result res =
      client.Get(path, {{"X-Api-Key", key}});
  if (!res) {
    throw ApiError("no response from weather service: " +
                   httplib::to_string(res.error()));
  }
  if (res->status == 401 || res->status == 403) {
    throw ApiError("weather service rejected the credential");
  }
  if (res->status == 429) {
    throw ApiError("weather service rate limit hit; retry later");
  }
  if (res->status != 200) {
    throw ApiError("weather service returned status " +
                   std::to_string(res->status));
  }

  std::vector<DailyWeather> rows = parse_payload(res->body, start, end);
  std::filesystem::create_directories(options.cache_dir);
  write_text_file(cache_file, res->body);
  return rows;
}

}  // namespace heatdml
