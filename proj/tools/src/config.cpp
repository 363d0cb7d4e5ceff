#include "ladder_cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ladder/errors.hpp"

namespace ladder::cli {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string strip_comment(const std::string& line) {
  const auto pos = line.find_first_of("#;");
  return pos == std::string::npos ? line : line.substr(0, pos);
}

template <typename T>
std::optional<T> parse_number(const std::string& text) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
  Config config;
  config.source_ = source;
  std::string section;
  std::string raw;
  int line = 0;
  const auto error = [&](const std::string& message) {
    throw ConfigError(source + ":" + std::to_string(line) + ": " + message);
  };
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(strip_comment(raw));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') error("unterminated section header");
      section = trim(std::string_view(text).substr(1, text.size() - 2));
      if (section != "model" && section != "run" && section != "output") {
        error("unknown section [" + section + "] (expected model, run or output)");
      }
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) error("expected 'key = value'");
    if (section.empty()) error("key outside of any section");
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    if (key.empty()) error("empty key");
    if (value.empty()) error("[" + section + "] " + key + ": empty value");
    auto& entries = config.sections_[section];
    if (entries.count(key) != 0) {
      error("[" + section + "] " + key + ": duplicate key (first set on line " +
            std::to_string(entries[key].line) + ")");
    }
    entries[key] = Entry{value, line};
  }
  return config;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  return parse(in, path.string());
}

const Config::Entry* Config::find(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto e = s->second.find(key);
  if (e == s->second.end()) return nullptr;
  e->second.used = true;
  return &e->second;
}

bool Config::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

void Config::fail(const std::string& section, const std::string& key,
                  const std::string& message) const {
  const auto s = sections_.find(section);
  std::string where = source_;
  if (s != sections_.end()) {
    const auto e = s->second.find(key);
    if (e != s->second.end()) where += ":" + std::to_string(e->second.line);
  }
  throw ConfigError(where + ": [" + section + "] " + key + ": " + message);
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               std::optional<std::string> fallback) const {
  if (const Entry* e = find(section, key)) return e->value;
  if (!fallback) fail(section, key, "required key is missing");
  return *fallback;
}

double Config::get_double(const std::string& section, const std::string& key,
                          std::optional<double> fallback) const {
  const Entry* e = find(section, key);
  if (!e) {
    if (!fallback) fail(section, key, "required key is missing");
    return *fallback;
  }
  const std::optional<double> v = parse_number<double>(e->value);
  if (!v || !std::isfinite(*v)) fail(section, key, "expected a finite number, got '" + e->value + "'");
  return *v;
}

double Config::get_positive(const std::string& section, const std::string& key,
                            std::optional<double> fallback) const {
  const double v = get_double(section, key, fallback);
  if (!(v > 0.0)) fail(section, key, "must be positive");
  return v;
}

std::int64_t Config::get_int(const std::string& section, const std::string& key,
                             std::optional<std::int64_t> fallback) const {
  const Entry* e = find(section, key);
  if (!e) {
    if (!fallback) fail(section, key, "required key is missing");
    return *fallback;
  }
  const std::optional<std::int64_t> v = parse_number<std::int64_t>(e->value);
  if (!v) fail(section, key, "expected an integer, got '" + e->value + "'");
  return *v;
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      std::optional<bool> fallback) const {
  const Entry* e = find(section, key);
  if (!e) {
    if (!fallback) fail(section, key, "required key is missing");
    return *fallback;
  }
  if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
  if (e->value == "false" || e->value == "no" || e->value == "0") return false;
  fail(section, key, "expected true or false, got '" + e->value + "'");
}

std::vector<int> Config::get_int_list(const std::string& section, const std::string& key,
                                      std::optional<std::vector<int>> fallback) const {
  const Entry* e = find(section, key);
  if (!e) {
    if (!fallback) fail(section, key, "required key is missing");
    return *fallback;
  }
  std::vector<int> out;
  std::stringstream items(e->value);
  std::string item;
  while (std::getline(items, item, ',')) {
    item = trim(item);
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      const std::optional<int> v = parse_number<int>(item);
      if (!v) fail(section, key, "bad list item '" + item + "'");
      out.push_back(*v);
      continue;
    }
    std::string upper = item.substr(dots + 2);
    int step = 1;
    if (const auto colon = upper.find(':'); colon != std::string::npos) {
      const std::optional<int> s = parse_number<int>(trim(upper.substr(colon + 1)));
      if (!s || *s <= 0) fail(section, key, "bad range step in '" + item + "'");
      step = *s;
      upper = upper.substr(0, colon);
    }
    const std::optional<int> a = parse_number<int>(trim(item.substr(0, dots)));
    const std::optional<int> b = parse_number<int>(trim(upper));
    if (!a || !b || *b < *a) fail(section, key, "bad range '" + item + "'");
    for (int v = *a; v <= *b; v += step) out.push_back(v);
  }
  return out;
}

void Config::reject_unused() const {
  for (const auto& [section, entries] : sections_) {
    for (const auto& [key, entry] : entries) {
      if (!entry.used) {
        throw ConfigError(source_ + ":" + std::to_string(entry.line) + ": [" + section + "] " +
                          key + ": unknown key for this command");
      }
    }
  }
}

ModelParams model_from_config(const Config& config) {
  const double e1 = config.get_double("model", "e1");
  const double e2 = config.get_double("model", "e2");
  const double e3 = config.get_double("model", "e3");
  const std::int64_t n0 = config.get_int("model", "n0");
  if (n0 < 1) config.fail("model", "n0", "must be >= 1");
  const bool has_u = config.has("model", "u");
  const bool has_g1 = config.has("model", "g1");
  const bool has_v = config.has("model", "v");
  const bool has_g2 = config.has("model", "g2");
  if (has_u == has_g1) config.fail("model", has_u ? "g1" : "u", "give exactly one of u and g1");
  if (has_v == has_g2) config.fail("model", has_v ? "g2" : "v", "give exactly one of v and g2");
  if (!(e1 < e2 && e2 < e3)) config.fail("model", "e2", "levels must satisfy e1 < e2 < e3");
  const double sqrt_n = std::sqrt(static_cast<double>(n0));
  const double u = has_u ? config.get_double("model", "u")
                         : config.get_double("model", "g1") * (e2 - e1) / sqrt_n;
  const double v = has_v ? config.get_double("model", "v")
                         : config.get_double("model", "g2") * (e3 - e2) / sqrt_n;
  try {
    const double min_gap = config.get_positive("model", "min_gap", 1e-6);
    return ModelParams(e1, e2, e3, u, v, n0, min_gap);
  } catch (const InvalidArgument& err) {
    config.fail("model", "e1", err.what());
  }
}

std::vector<double> grid_from_config(const Config& config, const std::string& prefix,
                                     double min_default, double max_default, int points_default) {
  const double lo = config.get_double("run", prefix + "_min", min_default);
  const double hi = config.get_double("run", prefix + "_max", max_default);
  const std::int64_t points = config.get_int("run", prefix + "_points", points_default);
  if (points < 1) config.fail("run", prefix + "_points", "must be >= 1");
  if (points > 1 && !(hi > lo)) config.fail("run", prefix + "_max", "grid bounds must be ordered");
  std::vector<double> out(static_cast<std::size_t>(points));
  for (std::int64_t i = 0; i < points; ++i) {
    out[static_cast<std::size_t>(i)] =
        points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return out;
}

std::pair<int, int> transition_from_config(const Config& config, const std::string& key,
                                           const std::string& fallback) {
  const std::string text = config.get_string("run", key, fallback);
  if (text.size() != 3 || text[1] != '-' || text[0] < '1' || text[0] > '3' || text[2] < '1' ||
      text[2] > '3' || text[0] >= text[2]) {
    config.fail("run", key, "expected a transition like 1-2, 2-3 or 1-3, got '" + text + "'");
  }
  return {text[0] - '0', text[2] - '0'};
}

}  // namespace ladder::cli
