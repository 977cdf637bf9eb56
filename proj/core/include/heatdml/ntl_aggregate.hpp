#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "heatdml/types.hpp"

namespace heatdml {

enum class QualityFlag { good_quality, gap_filled, poor_quality };

QualityFlag parse_quality_flag(std::string_view text);
std::string quality_flag_name(QualityFlag flag);

struct PixelObservation {
  std::string pixel_id;
  Date date;
  double raw_radiance = 0.0;  // sensor counts before scaling
  double area = 0.0;          // km², > 0
  QualityFlag quality_flag = QualityFlag::good_quality;
  bool is_fill = false;  // fill pixels carry no usable radiance
};

// Area-weighted mean of scaled radiance over the non-fill pixels of one date:
// sum(raw·scale·area) / sum(area). Throws when every pixel is fill.
NtlDaily aggregate_daily(const std::vector<PixelObservation>& pixels,
                         double scale_factor = 1.0);

// (# gap_filled) / (# non-fill). Throws when there are no non-fill pixels.
double gap_filled_fraction(const std::vector<PixelObservation>& pixels);

std::vector<PixelObservation> load_pixel_csv(const std::filesystem::path& path);

struct AggregateReport {
  std::vector<NtlDaily> series;  // date-sorted
  std::size_t poor_quality_pixels = 0;
  std::size_t skipped_dates = 0;  // dates whose pixels were all fill
  std::vector<std::string> warnings;
};

// Groups a pixel table by date and aggregates each day. Warns when the
// pixel-id set is not constant across dates; all-fill dates are skipped and
// counted rather than aborting the series.
AggregateReport aggregate_series(const std::vector<PixelObservation>& pixels,
                                 double scale_factor = 1.0);

}  // namespace heatdml
