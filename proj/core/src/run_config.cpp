#include "heatdml/run_config.hpp"

#include <cctype>
#include <set>
#include <utility>

#include <json.hpp>

#include "heatdml/csv.hpp"
#include "heatdml/errors.hpp"
#include "heatdml/random.hpp"

namespace heatdml {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) {
      throw ValidationError("unknown config key '" + key + "' in " + where);
    }
  }
}

double number_or(const json& obj, const char* key, double fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) {
    throw ValidationError(std::string("config key '") + key +
                          "' must be a number");
  }
  return it->get<double>();
}

std::int64_t integer_or(const json& obj, const char* key,
                        std::int64_t fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) {
    throw ValidationError(std::string("config key '") + key +
                          "' must be an integer");
  }
  return it->get<std::int64_t>();
}

bool boolean_or(const json& obj, const char* key, bool fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) {
    throw ValidationError(std::string("config key '") + key +
                          "' must be a boolean");
  }
  return it->get<bool>();
}

std::string string_or(const json& obj, const char* key, std::string fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) {
    throw ValidationError(std::string("config key '") + key +
                          "' must be a string");
  }
  return it->get<std::string>();
}

LassoOptions parse_lasso(const json& obj) {
  reject_unknown_keys(
      obj, {"n_lambda", "lambda_min_ratio", "cv_folds", "tol", "max_sweeps"},
      "lasso");
  LassoOptions opts;
  opts.n_lambda = static_cast<int>(integer_or(obj, "n_lambda", opts.n_lambda));
  opts.lambda_min_ratio =
      number_or(obj, "lambda_min_ratio", opts.lambda_min_ratio);
  opts.cv_folds = static_cast<int>(integer_or(obj, "cv_folds", opts.cv_folds));
  opts.tol = number_or(obj, "tol", opts.tol);
  opts.max_sweeps =
      static_cast<int>(integer_or(obj, "max_sweeps", opts.max_sweeps));
  return opts;
}

ForestOptions parse_forest(const json& obj) {
  reject_unknown_keys(obj, {"n_trees", "mtry", "min_node", "bootstrap"},
                      "forest");
  ForestOptions opts;
  opts.n_trees = static_cast<int>(integer_or(obj, "n_trees", opts.n_trees));
  opts.mtry = static_cast<int>(integer_or(obj, "mtry", opts.mtry));
  opts.min_node = static_cast<int>(integer_or(obj, "min_node", opts.min_node));
  opts.bootstrap = boolean_or(obj, "bootstrap", opts.bootstrap);
  return opts;
}

CityJob parse_city(const json& obj, const std::filesystem::path& base_dir,
                   std::uint64_t run_seed, std::size_t index) {
  if (!obj.is_object()) {
    throw ValidationError("each entry of 'cities' must be an object");
  }
  reject_unknown_keys(obj,
                      {"name", "weather_csv", "ntl_csv", "pixel_csv",
                       "pixel_scale", "percentile_p", "duration_d", "cdd_base",
                       "k_folds", "seed", "repetitions", "threshold_column",
                       "include_interactions", "lasso", "forest"},
                      "city");

  CityJob job;
  job.config.city_name = string_or(obj, "name", "");
  if (job.config.city_name.empty()) {
    throw ValidationError("every city needs a non-empty 'name'");
  }
  const std::string where = "city '" + job.config.city_name + "'";

  auto resolve = [&](const char* key) -> std::filesystem::path {
    const std::string text = string_or(obj, key, "");
    if (text.empty()) return {};
    std::filesystem::path p(text);
    return p.is_absolute() ? p : base_dir / p;
  };
  job.weather_csv = resolve("weather_csv");
  job.ntl_csv = resolve("ntl_csv");
  job.pixel_csv = resolve("pixel_csv");
  if (job.weather_csv.empty()) {
    throw ValidationError(where + " needs a 'weather_csv' path");
  }
  if (job.ntl_csv.empty() == job.pixel_csv.empty()) {
    throw ValidationError(where +
                          " needs exactly one of 'ntl_csv' or 'pixel_csv'");
  }
  job.pixel_scale = number_or(obj, "pixel_scale", 1.0);
  if (!(job.pixel_scale > 0.0)) {
    throw ValidationError(where + ": 'pixel_scale' must be positive");
  }

  CityConfig& c = job.config;
  c.percentile_p = number_or(obj, "percentile_p", c.percentile_p);
  c.duration_d = static_cast<int>(integer_or(obj, "duration_d", c.duration_d));
  c.cdd_base = number_or(obj, "cdd_base", c.cdd_base);
  c.k_folds = static_cast<int>(integer_or(obj, "k_folds", c.k_folds));
  c.repetitions =
      static_cast<int>(integer_or(obj, "repetitions", c.repetitions));
  c.threshold_column = string_or(obj, "threshold_column", c.threshold_column);
  c.feature_spec.include_interactions =
      boolean_or(obj, "include_interactions", true);
  c.seed = obj.contains("seed")
               ? static_cast<std::uint64_t>(integer_or(obj, "seed", 0))
               : derive_seed(run_seed, index);

  if (!(c.percentile_p > 0.0 && c.percentile_p < 1.0)) {
    throw ValidationError(where + ": 'percentile_p' must lie in (0, 1)");
  }
  if (c.duration_d < 1) {
    throw ValidationError(where + ": 'duration_d' must be at least 1");
  }
  if (c.k_folds < 2) {
    throw ValidationError(where + ": 'k_folds' must be at least 2");
  }
  if (c.repetitions < 1) {
    throw ValidationError(where + ": 'repetitions' must be at least 1");
  }
  if (c.threshold_column != "tempavg" && c.threshold_column != "tempmax") {
    throw ValidationError(where +
                          ": 'threshold_column' must be tempavg or tempmax");
  }

  if (const auto it = obj.find("lasso"); it != obj.end()) {
    if (!it->is_object()) throw ValidationError(where + ": 'lasso' must be an object");
    c.nuisance.lasso = parse_lasso(*it);
  }
  if (const auto it = obj.find("forest"); it != obj.end()) {
    if (!it->is_object()) throw ValidationError(where + ": 'forest' must be an object");
    c.nuisance.forest = parse_forest(*it);
  }
  return job;
}

}  // namespace

RunConfig parse_run_config(const std::string& text,
                           const std::filesystem::path& base_dir) {
  const json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ValidationError("config is not a JSON object");
  }
  reject_unknown_keys(doc,
                      {"cities", "out_dir", "format", "seed", "jobs", "p_grid",
                       "d_grid", "stages"},
                      "config");

  RunConfig config;
  config.format = string_or(doc, "format", config.format);
  if (config.format != "csv" && config.format != "json") {
    throw ValidationError("'format' must be csv or json");
  }
  config.seed = static_cast<std::uint64_t>(integer_or(doc, "seed", 0));
  config.jobs = static_cast<int>(integer_or(doc, "jobs", config.jobs));
  if (config.jobs < 1) throw ValidationError("'jobs' must be at least 1");
  {
    const std::string out = string_or(doc, "out_dir", config.out_dir.string());
    std::filesystem::path p(out);
    config.out_dir = p.is_absolute() ? p : base_dir / p;
  }

  if (const auto it = doc.find("p_grid"); it != doc.end()) {
    if (!it->is_array() || it->empty()) {
      throw ValidationError("'p_grid' must be a non-empty array");
    }
    config.p_grid.clear();
    for (const auto& v : *it) {
      if (!v.is_number()) throw ValidationError("'p_grid' entries must be numbers");
      const double p = v.get<double>();
      if (!(p > 0.0 && p < 1.0)) {
        throw ValidationError("'p_grid' entries must lie in (0, 1)");
      }
      config.p_grid.push_back(p);
    }
  }
  if (const auto it = doc.find("d_grid"); it != doc.end()) {
    if (!it->is_array() || it->empty()) {
      throw ValidationError("'d_grid' must be a non-empty array");
    }
    config.d_grid.clear();
    for (const auto& v : *it) {
      if (!v.is_number_integer()) {
        throw ValidationError("'d_grid' entries must be integers");
      }
      const auto d = v.get<std::int64_t>();
      if (d < 1) throw ValidationError("'d_grid' entries must be at least 1");
      config.d_grid.push_back(static_cast<int>(d));
    }
  }

  if (const auto it = doc.find("stages"); it != doc.end()) {
    if (!it->is_object()) throw ValidationError("'stages' must be an object");
    reject_unknown_keys(*it, {"estimate", "sweep", "event_study", "diagnostics"},
                        "stages");
    config.stages.estimate = boolean_or(*it, "estimate", true);
    config.stages.sweep = boolean_or(*it, "sweep", true);
    config.stages.event_study = boolean_or(*it, "event_study", true);
    config.stages.diagnostics = boolean_or(*it, "diagnostics", true);
  }

  const auto cities_it = doc.find("cities");
  if (cities_it == doc.end() || !cities_it->is_array() || cities_it->empty()) {
    throw ValidationError("config needs a non-empty 'cities' array");
  }
  std::set<std::string> slugs;
  for (std::size_t i = 0; i < cities_it->size(); ++i) {
    CityJob job = parse_city((*cities_it)[i], base_dir, config.seed, i);
    if (!slugs.insert(city_slug(job.config.city_name)).second) {
      throw ValidationError("city names collide after slugging: '" +
                            job.config.city_name + "'");
    }
    config.cities.push_back(std::move(job));
  }
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_text_file(path), path.parent_path());
}

std::string city_slug(const std::string& name) {
  std::string slug;
  slug.reserve(name.size());
  bool pending_dash = false;
  for (unsigned char c : name) {
    if (std::isalnum(c)) {
      if (pending_dash && !slug.empty()) slug.push_back('-');
      pending_dash = false;
      slug.push_back(static_cast<char>(std::tolower(c)));
    } else {
      pending_dash = true;
    }
  }
  return slug.empty() ? "city" : slug;
}

std::string canonical_config_json(const RunConfig& config) {
  json doc;
  doc["out_dir"] = config.out_dir.generic_string();
  doc["format"] = config.format;
  doc["seed"] = config.seed;
  doc["jobs"] = config.jobs;
  doc["p_grid"] = config.p_grid;
  doc["d_grid"] = config.d_grid;
  doc["stages"] = {{"estimate", config.stages.estimate},
                   {"sweep", config.stages.sweep},
                   {"event_study", config.stages.event_study},
                   {"diagnostics", config.stages.diagnostics}};
  doc["cities"] = json::array();
  for (const auto& job : config.cities) {
    const CityConfig& c = job.config;
    json city;
    city["name"] = c.city_name;
    city["weather_csv"] = job.weather_csv.generic_string();
    city["ntl_csv"] = job.ntl_csv.generic_string();
    city["pixel_csv"] = job.pixel_csv.generic_string();
    city["pixel_scale"] = job.pixel_scale;
    city["percentile_p"] = c.percentile_p;
    city["duration_d"] = c.duration_d;
    city["cdd_base"] = c.cdd_base;
    city["k_folds"] = c.k_folds;
    city["seed"] = c.seed;
    city["repetitions"] = c.repetitions;
    city["threshold_column"] = c.threshold_column;
    city["include_interactions"] = c.feature_spec.include_interactions;
    city["lasso"] = {{"n_lambda", c.nuisance.lasso.n_lambda},
                     {"lambda_min_ratio", c.nuisance.lasso.lambda_min_ratio},
                     {"cv_folds", c.nuisance.lasso.cv_folds},
                     {"tol", c.nuisance.lasso.tol},
                     {"max_sweeps", c.nuisance.lasso.max_sweeps}};
    city["forest"] = {{"n_trees", c.nuisance.forest.n_trees},
                      {"mtry", c.nuisance.forest.mtry},
                      {"min_node", c.nuisance.forest.min_node},
                      {"bootstrap", c.nuisance.forest.bootstrap}};
    doc["cities"].push_back(std::move(city));
  }
  return doc.dump();
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

}  // namespace heatdml
