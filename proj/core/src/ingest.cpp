#include "heatdml/ingest.hpp"

#include <algorithm>

#include "heatdml/csv.hpp"
#include "heatdml/errors.hpp"

namespace heatdml {

namespace detail {

void validate_weather_row(const DailyWeather& row, const std::string& where) {
  if (row.humidity < 0.0 || row.humidity > 100.0) {
    throw ValidationError("humidity out of range " + where);
  }
  if (row.cloudcover < 0.0 || row.cloudcover > 100.0) {
    throw ValidationError("cloudcover out of range " + where);
  }
  if (row.precip < 0.0) throw ValidationError("precip out of range " + where);
  if (row.windspeed < 0.0) {
    throw ValidationError("windspeed out of range " + where);
  }
  if (row.solarenergy < 0.0) {
    throw ValidationError("solarenergy out of range " + where);
  }
  if (row.dew > row.temp_max) {
    throw ValidationError("dew exceeds tempmax " + where);
  }
  if (row.cdd && *row.cdd < 0.0) {
    throw ValidationError("cdd out of range " + where);
  }
}

void validate_ntl_row(const NtlDaily& row, const std::string& where) {
  if (!(row.radiance > 0.0)) {
    throw ValidationError("radiance must be positive " + where);
  }
  if (row.gap_fraction < 0.0 || row.gap_fraction > 1.0) {
    throw ValidationError("gap_fraction out of range " + where);
  }
}

}  // namespace detail

namespace {

template <typename Row>
void sort_and_check_dates(std::vector<Row>& rows, const char* what) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].date == rows[i - 1].date) {
      throw ValidationError(std::string("duplicate date ") +
                            rows[i].date.iso() + " in " + what);
    }
  }
}

bool row_has_gap(const CsvTable& table, const std::vector<std::string>& row,
                 const std::vector<std::size_t>& required,
                 std::size_t row_index, const char* what,
                 std::vector<std::string>* warnings) {
  for (std::size_t col : required) {
    if (col >= row.size() || row[col].empty()) {
      if (warnings) {
        warnings->push_back(std::string(what) + ": line " +
                            std::to_string(table.line_of(row_index)) +
                            ": missing '" + table.header[col] +
                            "', row dropped");
      }
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<DailyWeather> load_weather_csv(const std::filesystem::path& path,
                                           const WeatherSchema& schema,
                                           std::vector<std::string>* warnings) {
  const CsvTable table = read_csv(path);
  const std::size_t c_date = table.column(schema.date);
  const std::size_t c_tempmax = table.column(schema.tempmax);
  const std::size_t c_tempavg = table.column(schema.tempavg);
  const std::size_t c_humidity = table.column(schema.humidity);
  const std::size_t c_dew = table.column(schema.dew);
  const std::size_t c_cloud = table.column(schema.cloudcover);
  const std::size_t c_precip = table.column(schema.precip);
  const std::size_t c_wind = table.column(schema.windspeed);
  const std::size_t c_solar = table.column(schema.solarenergy);
  const auto c_cdd = table.find_column(schema.cdd);

  const std::vector<std::size_t> required = {c_date,   c_tempmax, c_tempavg,
                                             c_humidity, c_dew,   c_cloud,
                                             c_precip, c_wind,    c_solar};
  std::vector<DailyWeather> rows;
  rows.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    if (row_has_gap(table, r, required, i, "weather csv", warnings)) continue;
    const std::string where = "(line " + std::to_string(table.line_of(i)) + ")";
    DailyWeather w;
    w.date = Date::parse(r[c_date]);
    w.temp_max = parse_double(r[c_tempmax], schema.tempmax + " " + where);
    w.temp_avg = parse_double(r[c_tempavg], schema.tempavg + " " + where);
    w.humidity = parse_double(r[c_humidity], schema.humidity + " " + where);
    w.dew = parse_double(r[c_dew], schema.dew + " " + where);
    w.cloudcover = parse_double(r[c_cloud], schema.cloudcover + " " + where);
    w.precip = parse_double(r[c_precip], schema.precip + " " + where);
    w.windspeed = parse_double(r[c_wind], schema.windspeed + " " + where);
    w.solarenergy = parse_double(r[c_solar], schema.solarenergy + " " + where);
    if (c_cdd && *c_cdd < r.size() && !r[*c_cdd].empty()) {
      w.cdd = parse_double(r[*c_cdd], schema.cdd + " " + where);
    }
    detail::validate_weather_row(w, where);
    rows.push_back(w);
  }
  sort_and_check_dates(rows, "weather csv");
  return rows;
}

std::vector<NtlDaily> load_ntl_csv(const std::filesystem::path& path,
                                   std::vector<std::string>* warnings) {
  const CsvTable table = read_csv(path);
  const std::size_t c_date = table.column("date");
  const std::size_t c_radiance = table.column("radiance");
  const std::size_t c_gap = table.column("gap_fraction");
  const std::vector<std::size_t> required = {c_date, c_radiance, c_gap};

  std::vector<NtlDaily> rows;
  rows.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    if (row_has_gap(table, r, required, i, "ntl csv", warnings)) continue;
    const std::string where = "(line " + std::to_string(table.line_of(i)) + ")";
    NtlDaily n;
    n.date = Date::parse(r[c_date]);
    n.radiance = parse_double(r[c_radiance], "radiance " + where);
    n.gap_fraction = parse_double(r[c_gap], "gap_fraction " + where);
    detail::validate_ntl_row(n, where);
    rows.push_back(n);
  }
  sort_and_check_dates(rows, "ntl csv");
  return rows;
}

CityDataset join_on_date(std::vector<DailyWeather> weather,
                         std::vector<NtlDaily> ntl) {
  sort_and_check_dates(weather, "weather");
  sort_and_check_dates(ntl, "ntl");
  CityDataset out;
  std::size_t i = 0, j = 0;
  while (i < weather.size() && j < ntl.size()) {
    if (weather[i].date < ntl[j].date) {
      ++out.dropped_weather;
      ++i;
    } else if (ntl[j].date < weather[i].date) {
      ++out.dropped_ntl;
      ++j;
    } else {
      out.weather.push_back(weather[i]);
      out.ntl.push_back(ntl[j]);
      ++i;
      ++j;
    }
  }
  out.dropped_weather += weather.size() - i;
  out.dropped_ntl += ntl.size() - j;
  if (out.weather.empty()) throw ValidationError("no overlapping dates");
  out.start = out.weather.front().date;
  out.end = out.weather.back().date;
  return out;
}

void write_weather_csv(const std::filesystem::path& path,
                       const std::vector<DailyWeather>& rows) {
  std::string out =
      "date,tempmax,tempavg,humidity,dew,cloudcover,precip,windspeed,"
      "solarenergy,cdd\n";
  for (const auto& w : rows) {
    append_csv_line(
        out, {w.date.iso(), format_double(w.temp_max), format_double(w.temp_avg),
              format_double(w.humidity), format_double(w.dew),
              format_double(w.cloudcover), format_double(w.precip),
              format_double(w.windspeed), format_double(w.solarenergy),
              w.cdd ? format_double(*w.cdd) : std::string()});
  }
  write_text_file(path, out);
}

void write_ntl_csv(const std::filesystem::path& path,
                   const std::vector<NtlDaily>& rows) {
  std::string out = "date,radiance,gap_fraction\n";
  for (const auto& n : rows) {
    append_csv_line(out, {n.date.iso(), format_double(n.radiance),
                          format_double(n.gap_fraction)});
  }
  write_text_file(path, out);
}

}  // namespace heatdml
