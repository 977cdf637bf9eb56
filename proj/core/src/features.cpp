#include "heatdml/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "heatdml/csv.hpp"
#include "heatdml/errors.hpp"

namespace heatdml {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

const std::vector<double>* find_column(const std::vector<NamedColumn>& pool,
                                       const std::string& name) {
  for (const auto& col : pool) {
    if (col.name == name) return &col.values;
  }
  return nullptr;
}

}  // namespace

FeatureSpec FeatureSpec::defaults() {
  FeatureSpec spec;
  spec.base = {"cdd",        "tempmax", "humidity",  "dew",
               "cloudcover", "precip",  "windspeed", "solarenergy"};
  spec.lags = {{"cdd", 1},     {"cdd", 2},     {"cdd", 3},
               {"humidity", 1}, {"tempavg", 1}, {"tempavg", 2}};
  spec.interactions = {{"heatwave", "humidity"},
                       {"heatwave", "solarenergy"},
                       {"tempmax", "cloudcover"}};
  return spec;
}

double cooling_degree_days(double temp_avg, double base) {
  return std::max(0.0, temp_avg - base);
}

std::vector<NamedColumn> build_lags(const NamedColumn& series,
                                    const std::vector<int>& lags) {
  std::vector<NamedColumn> out;
  out.reserve(lags.size());
  const auto n = series.values.size();
  for (int lag : lags) {
    if (lag < 1) throw ArgumentError("lag offsets must be >= 1");
    if (static_cast<std::size_t>(lag) >= n) {
      throw ArgumentError("lag " + std::to_string(lag) +
                          " leaves no defined rows");
    }
    NamedColumn col;
    col.name = series.name + "_lag" + std::to_string(lag);
    col.values.assign(n, kNan);
    for (std::size_t t = static_cast<std::size_t>(lag); t < n; ++t) {
      col.values[t] = series.values[t - static_cast<std::size_t>(lag)];
    }
    out.push_back(std::move(col));
  }
  return out;
}

std::vector<NamedColumn> build_interactions(
    const std::vector<NamedColumn>& columns,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<NamedColumn> out;
  out.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    const auto* va = find_column(columns, a);
    if (!va) throw SchemaError("unknown column '" + a + "'");
    const auto* vb = find_column(columns, b);
    if (!vb) throw SchemaError("unknown column '" + b + "'");
    if (va->size() != vb->size()) {
      throw ArgumentError("interaction columns differ in length");
    }
    NamedColumn col;
    col.name = a + "_x_" + b;
    col.values.resize(va->size());
    for (std::size_t t = 0; t < va->size(); ++t) {
      col.values[t] = (*va)[t] * (*vb)[t];
    }
    out.push_back(std::move(col));
  }
  return out;
}

FeatureMatrix assemble_design(const CityDataset& dataset,
                              const HeatwaveSeries& hw,
                              const CityConfig& config) {
  const auto n = dataset.weather.size();
  if (n == 0) throw ArgumentError("empty dataset");
  if (dataset.ntl.size() != n || hw.dates.size() != n ||
      hw.heatwave.size() != n) {
    throw ValidationError("misaligned dates between dataset and heatwaves");
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (dataset.weather[t].date != dataset.ntl[t].date ||
        dataset.weather[t].date != hw.dates[t]) {
      throw ValidationError("misaligned dates between dataset and heatwaves");
    }
    if (!(dataset.ntl[t].radiance > 0.0)) {
      throw ValidationError("radiance must be positive on " +
                            dataset.ntl[t].date.iso());
    }
  }

  // Column pool: every weather variable plus the treatment, full length.
  std::vector<NamedColumn> pool;
  auto add = [&](const char* name, auto getter) {
    NamedColumn col;
    col.name = name;
    col.values.resize(n);
    for (std::size_t t = 0; t < n; ++t) col.values[t] = getter(dataset.weather[t]);
    pool.push_back(std::move(col));
  };
  add("cdd", [&](const DailyWeather& w) {
    return w.cdd ? *w.cdd : cooling_degree_days(w.temp_avg, config.cdd_base);
  });
  add("tempmax", [](const DailyWeather& w) { return w.temp_max; });
  add("tempavg", [](const DailyWeather& w) { return w.temp_avg; });
  add("humidity", [](const DailyWeather& w) { return w.humidity; });
  add("dew", [](const DailyWeather& w) { return w.dew; });
  add("cloudcover", [](const DailyWeather& w) { return w.cloudcover; });
  add("precip", [](const DailyWeather& w) { return w.precip; });
  add("windspeed", [](const DailyWeather& w) { return w.windspeed; });
  add("solarenergy", [](const DailyWeather& w) { return w.solarenergy; });
  {
    NamedColumn treat;
    treat.name = "heatwave";
    treat.values.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
      treat.values[t] = static_cast<double>(hw.heatwave[t]);
    }
    pool.push_back(std::move(treat));
  }

  const FeatureSpec& spec = config.feature_spec;
  std::vector<const std::vector<double>*> design;
  std::vector<std::string> names;
  for (const auto& name : spec.base) {
    const auto* col = find_column(pool, name);
    if (!col) throw SchemaError("unknown column '" + name + "'");
    design.push_back(col);
    names.push_back(name);
  }

  int max_lag = 0;
  std::vector<NamedColumn> lag_columns;
  for (const auto& [name, offset] : spec.lags) {
    const auto* src = find_column(pool, name);
    if (!src) throw SchemaError("unknown column '" + name + "'");
    auto built = build_lags(NamedColumn{name, *src}, {offset});
    lag_columns.push_back(std::move(built.front()));
    max_lag = std::max(max_lag, offset);
  }
  for (const auto& col : lag_columns) {
    design.push_back(&col.values);
    names.push_back(col.name);
  }

  std::vector<NamedColumn> interaction_columns;
  if (spec.include_interactions && !spec.interactions.empty()) {
    interaction_columns = build_interactions(pool, spec.interactions);
    for (const auto& col : interaction_columns) {
      design.push_back(&col.values);
      names.push_back(col.name);
    }
  }

  const auto trim = static_cast<std::size_t>(max_lag);
  if (trim >= n) throw ArgumentError("lags leave no defined rows");
  const auto rows = n - trim;

  FeatureMatrix fm;
  fm.column_names = std::move(names);
  fm.dates.reserve(rows);
  fm.X.resize(static_cast<Eigen::Index>(rows),
              static_cast<Eigen::Index>(design.size()));
  fm.D.resize(static_cast<Eigen::Index>(rows));
  fm.Y.resize(static_cast<Eigen::Index>(rows));
  for (std::size_t t = trim; t < n; ++t) {
    const auto r = static_cast<Eigen::Index>(t - trim);
    fm.dates.push_back(dataset.weather[t].date);
    for (std::size_t j = 0; j < design.size(); ++j) {
      fm.X(r, static_cast<Eigen::Index>(j)) = (*design[j])[t];
    }
    fm.D(r) = static_cast<double>(hw.heatwave[t]);
    fm.Y(r) = std::log(dataset.ntl[t].radiance);
  }
  if (!fm.X.allFinite()) {
    throw ValidationError("design matrix has non-finite cells");
  }
  return fm;
}

void write_features_csv(const std::filesystem::path& path,
                        const FeatureMatrix& fm) {
  std::string out = "date,Y,D";
  for (const auto& name : fm.column_names) {
    out.push_back(',');
    out += csv_escape(name);
  }
  out.push_back('\n');
  for (std::size_t r = 0; r < fm.dates.size(); ++r) {
    const auto i = static_cast<Eigen::Index>(r);
    out += fm.dates[r].iso();
    out.push_back(',');
    out += format_double(fm.Y(i));
    out.push_back(',');
    out += format_double(fm.D(i));
    for (Eigen::Index j = 0; j < fm.X.cols(); ++j) {
      out.push_back(',');
      out += format_double(fm.X(i, j));
    }
    out.push_back('\n');
  }
  write_text_file(path, out);
}

FeatureMatrix load_features_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::size_t c_date = table.column("date");
  const std::size_t c_y = table.column("Y");
  const std::size_t c_d = table.column("D");
  FeatureMatrix fm;
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (j == c_date || j == c_y || j == c_d) continue;
    fm.column_names.push_back(table.header[j]);
  }
  const auto rows = table.rows.size();
  if (rows == 0) throw ValidationError("features csv has no rows");
  fm.X.resize(static_cast<Eigen::Index>(rows),
              static_cast<Eigen::Index>(fm.column_names.size()));
  fm.D.resize(static_cast<Eigen::Index>(rows));
  fm.Y.resize(static_cast<Eigen::Index>(rows));
  fm.dates.reserve(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& r = table.rows[i];
    const std::string where = "(line " + std::to_string(table.line_of(i)) + ")";
    if (r.size() != table.header.size()) {
      throw ValidationError("wrong cell count " + where);
    }
    fm.dates.push_back(Date::parse(r[c_date]));
    const auto row = static_cast<Eigen::Index>(i);
    fm.Y(row) = parse_double(r[c_y], "Y " + where);
    fm.D(row) = parse_double(r[c_d], "D " + where);
    Eigen::Index col = 0;
    for (std::size_t j = 0; j < table.header.size(); ++j) {
      if (j == c_date || j == c_y || j == c_d) continue;
      fm.X(row, col++) = parse_double(r[j], table.header[j] + " " + where);
    }
  }
  return fm;
}

}  // namespace heatdml
