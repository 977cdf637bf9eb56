#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace heatdml {

// A whole calendar day (proleptic Gregorian). ISO-8601 text form in and out.
struct Date {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31

  // Strict "YYYY-MM-DD". Throws ValidationError on anything else.
  static Date parse(std::string_view text);

  // Days since 1970-01-01 (negative before).
  static Date from_serial(std::int64_t days);
  std::int64_t serial() const;

  std::string iso() const;
  Date plus_days(std::int64_t n) const;

  auto operator<=>(const Date&) const = default;
};

bool is_valid_date(int year, int month, int day);

}  // namespace heatdml
