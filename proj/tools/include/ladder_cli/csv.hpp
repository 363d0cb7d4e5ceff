#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace ladder::cli {

/// Shortest text for v with `precision` significant digits, independent of
/// the C locale. NaN and infinities print as nan, inf, -inf.
std::string format_double(double v, int precision);

using CsvCell = std::variant<double, std::int64_t, int, bool, std::string>;

/// Buffered CSV table: '#' provenance lines, one header row, data rows.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns, int precision = 15);

  void comment(const std::string& line);
  void row(const std::vector<CsvCell>& cells);

  std::size_t rows() const noexcept { return rows_; }
  std::string str() const;
  /// Writes to path, creating parent directories.
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  int precision_;
  std::string comments_;
  std::string body_;
  std::size_t rows_ = 0;
};

}  // namespace ladder::cli
