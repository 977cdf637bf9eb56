#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace heatdml {

// Parsed CSV with a header row. Quoting follows RFC 4180: fields containing
// commas, quotes or newlines are double-quoted, embedded quotes doubled.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // rows[i] came from file line line_of(i); the header is line 1.
  std::size_t line_of(std::size_t row) const { return row + 2; }

  std::optional<std::size_t> find_column(std::string_view name) const;
  // Throws SchemaError naming the column when absent.
  std::size_t column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

std::string csv_escape(std::string_view field);
void append_csv_line(std::string& out, const std::vector<std::string>& fields);

// Shortest decimal form that round-trips to the same double. Deterministic,
// so repeated runs emit byte-identical reports.
std::string format_double(double v);

// Strict full-string parses; throw ValidationError with `what` as context.
double parse_double(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);

void write_text_file(const std::filesystem::path& path,
                     std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace heatdml
