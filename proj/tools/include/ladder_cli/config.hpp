#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ladder/model.hpp"

namespace ladder::cli {

/// Configuration problem, formatted as "source:line: [section] key: message".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key/value text with [section] headers. '#' or ';' start a comment,
/// keys are case-sensitive, a key may appear once per section.
class Config {
 public:
  static Config parse(std::istream& in, const std::string& source);
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key,
                         std::optional<std::string> fallback = std::nullopt) const;
  double get_double(const std::string& section, const std::string& key,
                    std::optional<double> fallback = std::nullopt) const;
  /// Like get_double but requires a strictly positive value.
  double get_positive(const std::string& section, const std::string& key,
                      std::optional<double> fallback = std::nullopt) const;
  std::int64_t get_int(const std::string& section, const std::string& key,
                       std::optional<std::int64_t> fallback = std::nullopt) const;
  bool get_bool(const std::string& section, const std::string& key,
                std::optional<bool> fallback = std::nullopt) const;
  /// Comma-separated integers; "a..b" expands to every integer (step 1), and
  /// "a..b:s" uses step s.
  std::vector<int> get_int_list(const std::string& section, const std::string& key,
                                std::optional<std::vector<int>> fallback = std::nullopt) const;

  /// Fails on keys that no command consumed (typos, misplaced keys).
  void reject_unused() const;

  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& message) const;

  const std::string& source() const noexcept { return source_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
  };

  const Entry* find(const std::string& section, const std::string& key) const;

  std::string source_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

/// [model] block: e1, e2, e3, exactly one of (u, g1), exactly one of (v, g2), n0.
ModelParams model_from_config(const Config& config);

/// Evenly spaced values from [run] <prefix>_min, <prefix>_max, <prefix>_points.
std::vector<double> grid_from_config(const Config& config, const std::string& prefix,
                                     double min_default, double max_default, int points_default);

/// "j-k" transition label, e.g. "1-2".
std::pair<int, int> transition_from_config(const Config& config, const std::string& key,
                                           const std::string& fallback);

}  // namespace ladder::cli
