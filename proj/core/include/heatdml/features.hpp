#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "heatdml/heatwave.hpp"
#include "heatdml/types.hpp"

namespace heatdml {

// Aligned design: X confounders, D treatment (heatwave), Y = ln(radiance).
// All columns finite; rows(X) = len(D) = len(Y) = len(dates).
struct FeatureMatrix {
  std::vector<Date> dates;
  std::vector<std::string> column_names;
  Eigen::MatrixXd X;
  Eigen::VectorXd D;
  Eigen::VectorXd Y;
};

double cooling_degree_days(double temp_avg, double base);

struct NamedColumn {
  std::string name;
  std::vector<double> values;
};

// Lagged copies named "<name>_lag<i>". Entries before the first defined lag
// are NaN and are trimmed by assemble_design.
std::vector<NamedColumn> build_lags(const NamedColumn& series,
                                    const std::vector<int>& lags);

// Elementwise products named "<a>_x_<b>".
std::vector<NamedColumn> build_interactions(
    const std::vector<NamedColumn>& columns,
    const std::vector<std::pair<std::string, std::string>>& pairs);

// Assembles X/D/Y per the config's FeatureSpec. Leading rows that lack any
// lag are trimmed from X, D and Y together; column order is the spec order
// (base, lags, interactions). Interactions may reference "heatwave".
FeatureMatrix assemble_design(const CityDataset& dataset,
                              const HeatwaveSeries& hw,
                              const CityConfig& config);

// Export/import with columns date,Y,D,<covariates...>.
void write_features_csv(const std::filesystem::path& path,
                        const FeatureMatrix& fm);
FeatureMatrix load_features_csv(const std::filesystem::path& path);

}  // namespace heatdml
