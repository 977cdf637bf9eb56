#include "heatdml/ntl_aggregate.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "heatdml/csv.hpp"
#include "heatdml/errors.hpp"

namespace heatdml {

QualityFlag parse_quality_flag(std::string_view text) {
  if (text == "good_quality") return QualityFlag::good_quality;
  if (text == "gap_filled") return QualityFlag::gap_filled;
  if (text == "poor_quality") return QualityFlag::poor_quality;
  throw ValidationError("unknown quality_flag '" + std::string(text) + "'");
}

std::string quality_flag_name(QualityFlag flag) {
  switch (flag) {
    case QualityFlag::good_quality: return "good_quality";
    case QualityFlag::gap_filled: return "gap_filled";
    case QualityFlag::poor_quality: return "poor_quality";
  }
  throw ArgumentError("invalid quality flag value");
}

NtlDaily aggregate_daily(const std::vector<PixelObservation>& pixels,
                         double scale_factor) {
  if (!(scale_factor > 0.0)) {
    throw ArgumentError("scale_factor must be positive");
  }
  if (pixels.empty()) throw ArgumentError("no pixels given");
  const Date date = pixels.front().date;
  double weighted = 0.0;
  double total_area = 0.0;
  for (const auto& px : pixels) {
    if (px.date != date) {
      throw ArgumentError("aggregate_daily expects pixels of a single date");
    }
    if (!(px.area > 0.0)) {
      throw ValidationError("pixel area must be positive");
    }
    if (px.is_fill) continue;
    weighted += px.raw_radiance * scale_factor * px.area;
    total_area += px.area;
  }
  if (total_area == 0.0) {
    throw ValidationError("no valid pixels for date " + date.iso());
  }
  return NtlDaily{date, weighted / total_area, gap_filled_fraction(pixels)};
}

double gap_filled_fraction(const std::vector<PixelObservation>& pixels) {
  std::size_t non_fill = 0;
  std::size_t gap_filled = 0;
  for (const auto& px : pixels) {
    if (px.is_fill) continue;
    ++non_fill;
    if (px.quality_flag == QualityFlag::gap_filled) ++gap_filled;
  }
  if (non_fill == 0) {
    throw ValidationError("no valid pixels: cannot compute gap fraction");
  }
  return static_cast<double>(gap_filled) / static_cast<double>(non_fill);
}

std::vector<PixelObservation> load_pixel_csv(
    const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::size_t c_id = table.column("pixel_id");
  const std::size_t c_date = table.column("date");
  const std::size_t c_rad = table.column("raw_radiance");
  const std::size_t c_area = table.column("area");
  const std::size_t c_flag = table.column("quality_flag");
  const std::size_t c_fill = table.column("is_fill");

  std::vector<PixelObservation> pixels;
  pixels.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    const std::string where = "(line " + std::to_string(table.line_of(i)) + ")";
    PixelObservation px;
    px.pixel_id = r[c_id];
    px.date = Date::parse(r[c_date]);
    px.raw_radiance = parse_double(r[c_rad], "raw_radiance " + where);
    px.area = parse_double(r[c_area], "area " + where);
    px.quality_flag = parse_quality_flag(r[c_flag]);
    const std::string& fill = r[c_fill];
    if (fill == "0" || fill == "false") {
      px.is_fill = false;
    } else if (fill == "1" || fill == "true") {
      px.is_fill = true;
    } else {
      throw ValidationError("cannot parse is_fill '" + fill + "' " + where);
    }
    if (!(px.area > 0.0)) {
      throw ValidationError("pixel area must be positive " + where);
    }
    pixels.push_back(std::move(px));
  }
  return pixels;
}

AggregateReport aggregate_series(const std::vector<PixelObservation>& pixels,
                                 double scale_factor) {
  std::map<Date, std::vector<PixelObservation>> by_date;
  for (const auto& px : pixels) by_date[px.date].push_back(px);
  if (by_date.empty()) throw ArgumentError("no pixels given");

  AggregateReport report;
  std::set<std::string> reference_ids;
  bool have_reference = false;
  bool warned_ids = false;
  for (const auto& [date, day_pixels] : by_date) {
    std::set<std::string> ids;
    for (const auto& px : day_pixels) {
      ids.insert(px.pixel_id);
      if (!px.is_fill && px.quality_flag == QualityFlag::poor_quality) {
        ++report.poor_quality_pixels;
      }
    }
    if (!have_reference) {
      reference_ids = std::move(ids);
      have_reference = true;
    } else if (!warned_ids && ids != reference_ids) {
      report.warnings.push_back("pixel sample differs on " + date.iso() +
                                "; the pixel set should stay constant");
      warned_ids = true;
    }
    bool all_fill = true;
    for (const auto& px : day_pixels) {
      if (!px.is_fill) {
        all_fill = false;
        break;
      }
    }
    if (all_fill) {
      ++report.skipped_dates;
      report.warnings.push_back("no valid pixels on " + date.iso() +
                                "; date skipped");
      continue;
    }
    report.series.push_back(aggregate_daily(day_pixels, scale_factor));
  }
  if (report.series.empty()) {
    throw ValidationError("no dates with valid pixels");
  }
  return report;
}

}  // namespace heatdml
