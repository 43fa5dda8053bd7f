#pragma once

#include <map>
#include <string>
#include <string_view>

namespace ratecount {

/// Shortest decimal form that parses back to the same double.
std::string format_real(double value);

/// Parses a full-string decimal number; throws InputError mentioning `what`.
double parse_real(std::string_view text, std::string_view what);

/// Flat `key = value` document. '#' starts a comment line; keys are unique.
class KeyValueDoc {
 public:
  static KeyValueDoc parse(std::string_view text);

  bool contains(const std::string& key) const { return values_.contains(key); }
  /// Throws InputError when the key is missing.
  const std::string& at(const std::string& key) const;
  double real(const std::string& key) const;
  long long integer(const std::string& key) const;

  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace ratecount
