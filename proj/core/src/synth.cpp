#include "heatdml/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "heatdml/calendar.hpp"
#include "heatdml/errors.hpp"
#include "heatdml/random.hpp"

namespace heatdml {

namespace {

std::vector<double> draw_normals(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> out(n);
  for (auto& v : out) v = normal(rng);
  return out;
}

void standardize_inplace(Eigen::MatrixXd& X) {
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double mean = X.col(j).mean();
    const double var = (X.col(j).array() - mean).square().mean();
    const double scale = var > 0.0 ? std::sqrt(var) : 1.0;
    X.col(j) = (X.col(j).array() - mean) / scale;
  }
}

double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }

}  // namespace

SynthData generate_synthetic(const SynthConfig& config) {
  const std::size_t n = config.n_days;
  if (n < 30) throw ArgumentError("n_days must be at least 30");
  if (config.noise_sd <= 0.0) throw ArgumentError("noise_sd must be positive");

  auto rng = make_rng(config.seed);

  // Slow-moving climate factor, standardized so the coefficients below keep
  // their intended scale regardless of n.
  std::vector<double> z(n);
  {
    const double phi = 0.5;
    double prev = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      prev = phi * prev + normal(rng);
      z[t] = prev;
    }
    double mean = 0.0;
    for (double v : z) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : z) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    const double sd = var > 0.0 ? std::sqrt(var) : 1.0;
    for (auto& v : z) v = (v - mean) / sd;
  }

  const auto e_tavg = draw_normals(rng, n);
  const auto e_tmax = draw_normals(rng, n);
  const auto e_hum = draw_normals(rng, n);
  const auto e_dew = draw_normals(rng, n);
  const auto e_cloud = draw_normals(rng, n);
  const auto e_precip = draw_normals(rng, n);
  const auto e_wind = draw_normals(rng, n);
  const auto e_solar = draw_normals(rng, n);

  SynthData data;
  data.true_theta = config.true_theta;
  data.weather.resize(n);
  const Date start{2015, 1, 1};
  const std::int64_t start_serial = start.serial();

  Eigen::MatrixXd X(static_cast<Eigen::Index>(n), 8);
  for (std::size_t t = 0; t < n; ++t) {
    DailyWeather& w = data.weather[t];
    w.date = Date::from_serial(start_serial + static_cast<std::int64_t>(t));
    w.temp_avg = 25.0 + 6.0 * z[t] + e_tavg[t] * 1.5;
    w.temp_max = w.temp_avg + 4.0 + std::abs(e_tmax[t]) * 2.0;
    w.humidity = std::clamp(60.0 - 8.0 * z[t] + e_hum[t] * 6.0, 5.0, 100.0);
    w.dew = std::min(w.temp_avg - (100.0 - w.humidity) / 5.0 + e_dew[t],
                     w.temp_max - 0.5);
    w.cloudcover = std::clamp(50.0 - 12.0 * z[t] + e_cloud[t] * 12.0, 0.0, 100.0);
    w.precip = std::max(0.0, e_precip[t] * 2.0 + (w.cloudcover - 50.0) / 25.0);
    w.windspeed = std::abs(10.0 + 3.0 * e_wind[t]);
    w.solarenergy = std::max(0.1, 4.0 + 1.5 * z[t] + e_solar[t] * 0.8);
    w.cdd = std::max(0.0, w.temp_avg - 18.0);

    const auto r = static_cast<Eigen::Index>(t);
    X(r, 0) = *w.cdd;
    X(r, 1) = w.temp_max;
    X(r, 2) = w.humidity;
    X(r, 3) = w.dew;
    X(r, 4) = w.cloudcover;
    X(r, 5) = w.precip;
    X(r, 6) = w.windspeed;
    X(r, 7) = w.solarenergy;
  }

  Eigen::MatrixXd Xs = X;
  standardize_inplace(Xs);

  const double conf = config.confounding_strength;
  Eigen::VectorXd D(static_cast<Eigen::Index>(n));
  Eigen::VectorXd g(static_cast<Eigen::Index>(n));
  for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(n); ++r) {
    const double index =
        conf * (0.9 * Xs(r, 0) + 0.5 * Xs(r, 7) - 0.35 * Xs(r, 2));
    double m = sigmoid(index);
    if (config.enforce_positivity) m = std::clamp(m, 0.05, 0.95);
    D(r) = uniform_real(rng) < m ? 1.0 : 0.0;

    double gr = conf * (0.6 * Xs(r, 0) - 0.4 * Xs(r, 2) + 0.5 * Xs(r, 7)) +
                0.3 * Xs(r, 4) - 0.2 * Xs(r, 5);
    if (config.nonlinearity == Nonlinearity::quadratic) {
      gr += 0.3 * conf * (Xs(r, 0) * Xs(r, 0) - 1.0);
    } else if (config.nonlinearity == Nonlinearity::interaction) {
      gr += 0.4 * conf * Xs(r, 0) * Xs(r, 7);
    }
    g(r) = gr;
  }

  const auto e_y = draw_normals(rng, n);
  Eigen::VectorXd Y(static_cast<Eigen::Index>(n));
  for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(n); ++r) {
    Y(r) = config.true_theta * D(r) + g(r) +
           e_y[static_cast<std::size_t>(r)] * config.noise_sd;
  }

  data.fm.column_names = {"cdd",        "tempmax", "humidity",
                          "dew",        "cloudcover", "precip",
                          "windspeed",  "solarenergy"};
  data.fm.X = std::move(X);
  data.fm.D = std::move(D);
  data.fm.Y = Y;
  data.fm.dates.resize(n);
  for (std::size_t t = 0; t < n; ++t) data.fm.dates[t] = data.weather[t].date;

  data.ntl.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    data.ntl[t].date = data.weather[t].date;
    data.ntl[t].radiance = std::exp(Y(static_cast<Eigen::Index>(t)));
    data.ntl[t].gap_fraction = 0.0;
  }
  return data;
}

std::size_t brute_force_heatwave_count(const std::vector<double>& temps,
                                       double percentile_p, int duration_d) {
  if (temps.empty()) throw ArgumentError("temperature series is empty");
  if (!(percentile_p > 0.0 && percentile_p < 1.0)) {
    throw ArgumentError("percentile must lie in (0, 1)");
  }
  if (duration_d < 1) throw ArgumentError("duration must be at least 1");

  std::vector<double> sorted = temps;
  std::sort(sorted.begin(), sorted.end());
  const double pos =
      percentile_p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - std::floor(pos);
  const double tau = sorted[lo] + frac * (sorted[hi] - sorted[lo]);

  const std::size_t n = temps.size();
  const auto d = static_cast<std::size_t>(duration_d);
  std::size_t count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (t + 1 < d) continue;
    bool all_hot = true;
    for (std::size_t k = 0; k < d; ++k) {
      if (!(temps[t - k] >= tau)) {
        all_hot = false;
        break;
      }
    }
    if (all_hot) ++count;
  }
  return count;
}

}  // namespace heatdml
