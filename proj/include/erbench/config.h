#pragma once

// Flat `key = value` configuration files. Blank lines and lines starting
// with '#' are ignored; values may be wrapped in double quotes.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "erbench/corpus.h"

namespace erbench {

class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  // Throws InputError on malformed lines or duplicate keys.
  static KeyValueConfig read(std::istream& in, const std::string& source);
  static KeyValueConfig load(const std::filesystem::path& path);

  bool contains(std::string_view key) const { return values_.contains(key); }
  std::optional<std::string> get(std::string_view key) const;
  void set(std::string key, std::string value);

  // Typed accessors; throw InputError naming the key on parse failure.
  std::optional<double> get_double(std::string_view key) const;
  std::optional<long long> get_int(std::string_view key) const;
  std::optional<unsigned long long> get_uint(std::string_view key) const;

  const StringMap<std::string>& values() const { return values_; }
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  StringMap<std::string> values_;
};

double parse_double(std::string_view s, std::string_view what);
long long parse_int(std::string_view s, std::string_view what);
unsigned long long parse_uint(std::string_view s, std::string_view what);

}  // namespace erbench
