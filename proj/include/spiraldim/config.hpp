#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spiraldim/rational.hpp"

namespace spiraldim {

// A config value: number (possibly an exact multiple of pi), string, or
// array of values.
struct ConfigValue {
  enum class Kind { Number, String, Array } kind = Kind::Number;
  double number = 0.0;
  std::optional<Fraction> pi_multiple;  // "pi/6" -> 1/6
  std::string text;  // string contents, or the literal token for numbers
  std::vector<ConfigValue> items;

  std::string canonical() const;
};

// Sections of key = value lines. Keys before any [section] live in "".
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<config>");
  static Config load(const std::string& path);

  bool has(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;
  const ConfigValue* find(const std::string& section, const std::string& key) const;

  double number(const std::string& section, const std::string& key, double def) const;
  std::optional<double> number(const std::string& section, const std::string& key) const;
  std::int64_t integer(const std::string& section, const std::string& key,
                       std::int64_t def) const;
  std::string string(const std::string& section, const std::string& key,
                     const std::string& def) const;
  bool boolean(const std::string& section, const std::string& key, bool def) const;

  void set(const std::string& section, const std::string& key, ConfigValue v);
  // Throws ConfigError naming the first key not in allowed.
  void require_keys(const std::string& section,
                    const std::vector<std::string>& allowed) const;
  std::vector<std::string> sections() const;

  // Sorted, whitespace-free rendering; the config hash is taken over this.
  std::string canonical() const;

 private:
  std::map<std::string, std::map<std::string, ConfigValue>> data_;
};

// Number or angle literal: 0.5, -1e-3, pi, -pi/6, 2*pi/5, 2pi/5.
ConfigValue parse_scalar(const std::string& token);

std::string sha256_hex(const std::string& data);

}  // namespace spiraldim
