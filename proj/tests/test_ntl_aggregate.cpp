#include <doctest.h>

#include <string>
#include <vector>

#include "heatdml/csv.hpp"
#include "heatdml/errors.hpp"
#include "heatdml/ntl_aggregate.hpp"
#include "test_util.hpp"

using namespace heatdml;

namespace {

PixelObservation px(const std::string& id, Date date, double rad, double area,
                    QualityFlag flag = QualityFlag::good_quality,
                    bool fill = false) {
  return PixelObservation{id, date, rad, area, flag, fill};
}

const Date kDay{2021, 6, 1};

}  // namespace

TEST_SUITE("ntl_aggregate") {

TEST_CASE("equal areas average evenly") {
  const auto day = aggregate_daily({px("a", kDay, 10, 2), px("b", kDay, 20, 2)});
  CHECK(day.date == kDay);
  CHECK(day.radiance == doctest::Approx(15.0));
  CHECK(day.gap_fraction == 0.0);
}

TEST_CASE("areas weight the mean") {
  const auto day = aggregate_daily({px("a", kDay, 10, 1), px("b", kDay, 30, 3)});
  CHECK(day.radiance == doctest::Approx(25.0));
}

TEST_CASE("the scale factor applies before weighting") {
  const auto day = aggregate_daily({px("a", kDay, 10, 1), px("b", kDay, 30, 3)},
                                   0.1);
  CHECK(day.radiance == doctest::Approx(2.5));
}

TEST_CASE("fill pixels are ignored") {
  const auto day = aggregate_daily(
      {px("a", kDay, 12, 2),
       px("b", kDay, 999, 5, QualityFlag::good_quality, true)});
  CHECK(day.radiance == doctest::Approx(12.0));
}

TEST_CASE("an all-fill day cannot be aggregated") {
  CHECK_THROWS_AS(
      aggregate_daily({px("a", kDay, 0, 2, QualityFlag::good_quality, true)}),
      ValidationError);
  CHECK_THROWS_AS(aggregate_daily({}), ArgumentError);
  CHECK_THROWS_AS(
      aggregate_daily({px("a", kDay, 10, 2)}, 0.0), ArgumentError);
}

TEST_CASE("mixed dates are refused") {
  CHECK_THROWS_AS(
      aggregate_daily({px("a", kDay, 10, 2), px("b", Date{2021, 6, 2}, 10, 2)}),
      ArgumentError);
}

TEST_CASE("gap fraction counts gap-filled among non-fill") {
  std::vector<PixelObservation> four;
  for (int i = 0; i < 4; ++i)
    four.push_back(px("p" + std::to_string(i), kDay, 10, 1));
  CHECK(gap_filled_fraction(four) == 0.0);

  for (auto& p : four) p.quality_flag = QualityFlag::gap_filled;
  CHECK(gap_filled_fraction(four) == 1.0);

  std::vector<PixelObservation> ten;
  for (int i = 0; i < 10; ++i) {
    ten.push_back(px("p" + std::to_string(i), kDay, 10, 1,
                     i < 3 ? QualityFlag::gap_filled
                           : QualityFlag::good_quality));
  }
  CHECK(gap_filled_fraction(ten) == doctest::Approx(0.3));

  std::vector<PixelObservation> fills = {
      px("a", kDay, 0, 1, QualityFlag::good_quality, true)};
  CHECK_THROWS_AS(gap_filled_fraction(fills), ValidationError);
}

TEST_CASE("quality flags parse both ways") {
  CHECK(parse_quality_flag("good_quality") == QualityFlag::good_quality);
  CHECK(parse_quality_flag("gap_filled") == QualityFlag::gap_filled);
  CHECK(parse_quality_flag("poor_quality") == QualityFlag::poor_quality);
  CHECK(quality_flag_name(QualityFlag::gap_filled) == "gap_filled");
  CHECK_THROWS_AS(parse_quality_flag("great"), ValidationError);
}

TEST_CASE("pixel tables load and aggregate to a sorted series") {
  const auto dir = testutil::fresh_dir("pixels");
  const auto path = dir / "pixels.csv";
  write_text_file(path,
                  "pixel_id,date,raw_radiance,area,quality_flag,is_fill\n"
                  "a,2021-06-02,10,1,good_quality,0\n"
                  "b,2021-06-02,30,3,gap_filled,0\n"
                  "a,2021-06-01,8,1,good_quality,false\n"
                  "b,2021-06-01,8,3,poor_quality,false\n"
                  "a,2021-06-03,5,1,good_quality,1\n"
                  "b,2021-06-03,7,3,good_quality,true\n");
  const auto pixels = load_pixel_csv(path);
  REQUIRE(pixels.size() == 6);

  const AggregateReport report = aggregate_series(pixels);
  REQUIRE(report.series.size() == 2);
  CHECK(report.series[0].date == Date{2021, 6, 1});
  CHECK(report.series[0].radiance == doctest::Approx(8.0));
  CHECK(report.series[1].date == Date{2021, 6, 2});
  CHECK(report.series[1].radiance == doctest::Approx(25.0));
  CHECK(report.series[1].gap_fraction == doctest::Approx(0.5));
  // 2021-06-03 is all fill: skipped, not fatal.
  CHECK(report.skipped_dates == 1);
  CHECK(report.poor_quality_pixels == 1);
}

TEST_CASE("a changing pixel set warns but still aggregates") {
  std::vector<PixelObservation> pixels = {
      px("a", Date{2021, 6, 1}, 10, 1), px("b", Date{2021, 6, 1}, 10, 1),
      px("a", Date{2021, 6, 2}, 12, 1)};
  const AggregateReport report = aggregate_series(pixels);
  CHECK(report.series.size() == 2);
  CHECK_FALSE(report.warnings.empty());
}

TEST_CASE("pixel csv validation") {
  const auto dir = testutil::fresh_dir("pixels");
  const auto bad_area = dir / "bad_area.csv";
  write_text_file(bad_area,
                  "pixel_id,date,raw_radiance,area,quality_flag,is_fill\n"
                  "a,2021-06-01,10,0,good_quality,0\n");
  CHECK_THROWS_AS(load_pixel_csv(bad_area), ValidationError);

  const auto bad_fill = dir / "bad_fill.csv";
  write_text_file(bad_fill,
                  "pixel_id,date,raw_radiance,area,quality_flag,is_fill\n"
                  "a,2021-06-01,10,1,good_quality,maybe\n");
  CHECK_THROWS_AS(load_pixel_csv(bad_fill), ValidationError);

  CHECK_THROWS_AS(aggregate_series({}), ArgumentError);
}

}  // TEST_SUITE
