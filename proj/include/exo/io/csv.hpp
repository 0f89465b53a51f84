#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace exo::io {

/// Shortest text that parses back to exactly `v`.
std::string format_double(double v);
/// Throws DataError naming `what` when `s` is not a complete number.
double parse_double(std::string_view s, std::string_view what = "value");

/// Row-at-a-time CSV output with a fixed header.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);

  void row(std::span<const double> values);
  void row(std::span<const std::string> cells);
  std::size_t columns() const { return header_.size(); }

 private:
  std::ostream& out_;
  std::vector<std::string> header_;
};

/// Whole-file CSV: a header and string cells. No quoting; cells must not
/// contain commas.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> find(std::string_view column) const;
  std::size_t require(std::string_view column) const;
  std::vector<double> numeric(std::string_view column) const;
  std::vector<double> numeric(std::size_t column) const;
};

CsvTable parse_csv(std::istream& in, std::string_view source = "csv");
CsvTable read_csv(const std::filesystem::path& path);

/// Open for writing, creating parent directories; throws DataError on failure.
std::ofstream open_output(const std::filesystem::path& path, bool binary = false);

}  // namespace exo::io
