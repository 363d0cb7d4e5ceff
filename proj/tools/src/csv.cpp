#include "ladder_cli/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace ladder::cli {
namespace {

std::string quote(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

std::string format_double(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // no "-0"
  std::array<char, 64> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, precision);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), ptr);
}

CsvTable::CsvTable(std::vector<std::string> columns, int precision)
    : columns_(std::move(columns)), precision_(precision) {
  if (precision < 1 || precision > 17) throw std::invalid_argument("CSV precision must be 1..17");
}

void CsvTable::comment(const std::string& line) { comments_ += "# " + line + "\n"; }

void CsvTable::row(const std::vector<CsvCell>& cells) {
  if (cells.size() != columns_.size()) throw std::logic_error("CSV row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) body_ += ',';
    std::visit(
        [&](const auto& cell) {
          using T = std::decay_t<decltype(cell)>;
          if constexpr (std::is_same_v<T, double>) {
            body_ += format_double(cell, precision_);
          } else if constexpr (std::is_same_v<T, bool>) {
            body_ += cell ? "1" : "0";
          } else if constexpr (std::is_same_v<T, std::string>) {
            body_ += quote(cell);
          } else {
            body_ += std::to_string(cell);
          }
        },
        cells[i]);
  }
  body_ += '\n';
  ++rows_;
}

std::string CsvTable::str() const {
  std::string header;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i > 0) header += ',';
    header += columns_[i];
  }
  return comments_ + header + "\n" + body_;
}

void CsvTable::write(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << str();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace ladder::cli
