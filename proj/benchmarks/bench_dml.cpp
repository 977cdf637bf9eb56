#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "heatdml/calendar.hpp"
#include "heatdml/dml.hpp"
#include "heatdml/heatwave.hpp"
#include "heatdml/random.hpp"
#include "heatdml/synth.hpp"
#include "heatdml/types.hpp"

namespace {

heatdml::CityConfig fast_config() {
  heatdml::CityConfig config;
  config.k_folds = 5;
  config.nuisance.lasso.n_lambda = 20;
  config.nuisance.lasso.cv_folds = 4;
  config.nuisance.forest.n_trees = 50;
  config.nuisance.forest.min_node = 20;
  return config;
}

void BM_dml_estimate(benchmark::State& state) {
  heatdml::SynthConfig synth;
  synth.n_days = static_cast<std::size_t>(state.range(0));
  synth.seed = 42;
  const auto data = heatdml::generate_synthetic(synth);
  const auto config = fast_config();
  for (auto _ : state) {
    auto est = heatdml::run_dml(data.fm, config);
    benchmark::DoNotOptimize(est);
  }
}

void BM_detect_heatwaves(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto rng = heatdml::make_rng(42);
  std::vector<double> temps(n);
  for (auto& t : temps) t = 18.0 + 12.0 * heatdml::uniform_real(rng);
  std::vector<heatdml::Date> dates(n);
  for (std::size_t i = 0; i < n; ++i) {
    dates[i] = heatdml::Date::from_serial(static_cast<std::int64_t>(i));
  }
  for (auto _ : state) {
    auto hs = heatdml::detect_heatwaves(dates, temps, 0.80, 3);
    benchmark::DoNotOptimize(hs);
  }
}

BENCHMARK(BM_dml_estimate)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_detect_heatwaves)->Arg(10000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
