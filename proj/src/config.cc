#include "erbench/config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "erbench/error.h"

namespace erbench {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view s, std::string_view what, const char* kind) {
  s = trim(s);
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError(std::string(what) + ": expected " + kind + ", got '" + std::string(s) +
                     "'");
  }
  return value;
}

}  // namespace

double parse_double(std::string_view s, std::string_view what) {
  const double v = parse_number<double>(s, what, "a number");
  if (!std::isfinite(v)) throw InputError(std::string(what) + ": value must be finite");
  return v;
}

long long parse_int(std::string_view s, std::string_view what) {
  return parse_number<long long>(s, what, "an integer");
}

unsigned long long parse_uint(std::string_view s, std::string_view what) {
  return parse_number<unsigned long long>(s, what, "a non-negative integer");
}

KeyValueConfig KeyValueConfig::read(std::istream& in, const std::string& source) {
  KeyValueConfig cfg;
  cfg.source_ = source;
  std::string raw;
  size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(strip_cr(raw));
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw input_error_at(source, line_no, "expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw input_error_at(source, line_no, "empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (!cfg.values_.emplace(std::string(key), std::string(value)).second) {
      throw input_error_at(source, line_no, "duplicate key '" + std::string(key) + "'");
    }
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path.string());
  return read(in, path.string());
}

std::optional<std::string> KeyValueConfig::get(std::string_view key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

void KeyValueConfig::set(std::string key, std::string value) {
  values_.insert_or_assign(std::move(key), std::move(value));
}

std::optional<double> KeyValueConfig::get_double(std::string_view key) const {
  auto v = get(key);
  if (!v) return std::nullopt;
  return parse_double(*v, source_ + ": " + std::string(key));
}

std::optional<long long> KeyValueConfig::get_int(std::string_view key) const {
  auto v = get(key);
  if (!v) return std::nullopt;
  return parse_int(*v, source_ + ": " + std::string(key));
}

std::optional<unsigned long long> KeyValueConfig::get_uint(std::string_view key) const {
  auto v = get(key);
  if (!v) return std::nullopt;
  return parse_uint(*v, source_ + ": " + std::string(key));
}

}  // namespace erbench
