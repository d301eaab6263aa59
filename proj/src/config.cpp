#include "spiraldim/config.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "spiraldim/errors.hpp"

namespace spiraldim {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

std::optional<std::int64_t> parse_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') i = 1;
  if (i == s.size()) return std::nullopt;
  for (std::size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) return std::nullopt;
  try {
    return std::stoll(s);
  } catch (...) {
    return std::nullopt;
  }
}

std::optional<ConfigValue> parse_angle(const std::string& tok) {
  // [sign][p[*]]pi[/q]
  const auto at = tok.find("pi");
  if (at == std::string::npos) return std::nullopt;
  std::string head = tok.substr(0, at), tail = tok.substr(at + 2);
  std::int64_t sign = 1;
  if (!head.empty() && (head[0] == '-' || head[0] == '+')) {
    if (head[0] == '-') sign = -1;
    head = head.substr(1);
  }
  if (!head.empty() && head.back() == '*') head.pop_back();
  std::int64_t p = 1, q = 1;
  if (!head.empty()) {
    auto v = parse_int(head);
    if (!v || *v < 0) return std::nullopt;
    p = *v;
  }
  if (!tail.empty()) {
    if (tail[0] != '/') return std::nullopt;
    auto v = parse_int(tail.substr(1));
    if (!v || *v <= 0) return std::nullopt;
    q = *v;
  }
  ConfigValue out;
  out.kind = ConfigValue::Kind::Number;
  out.pi_multiple = Fraction(sign * p, q);
  out.number = std::numbers::pi * double(sign * p) / double(q);
  out.text = out.pi_multiple->str() + "*pi";
  return out;
}

std::vector<std::string> split_top(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  bool in_str = false;
  std::string cur;
  for (char ch : s) {
    if (ch == '"') in_str = !in_str;
    if (!in_str && ch == '[') ++depth;
    if (!in_str && ch == ']') --depth;
    if (!in_str && depth == 0 && ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

ConfigValue parse_value(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) throw ConfigError("empty value");
  if (s.front() == '[') {
    if (s.back() != ']') throw ConfigError("unterminated array: " + s);
    ConfigValue v;
    v.kind = ConfigValue::Kind::Array;
    const std::string inner = trim(s.substr(1, s.size() - 2));
    if (!inner.empty())
      for (const auto& part : split_top(inner)) {
        if (part.empty()) continue;  // trailing comma
        v.items.push_back(parse_value(part));
      }
    return v;
  }
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') throw ConfigError("unterminated string: " + s);
    ConfigValue v;
    v.kind = ConfigValue::Kind::String;
    v.text = s.substr(1, s.size() - 2);
    return v;
  }
  try {
    return parse_scalar(s);
  } catch (const ConfigError&) {
    // bare words are strings (method = MonteCarlo, true/false)
    for (char ch : s)
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-'))
        throw;
    ConfigValue v;
    v.kind = ConfigValue::Kind::String;
    v.text = s;
    return v;
  }
}

}  // namespace

ConfigValue parse_scalar(const std::string& token) {
  const std::string t = trim(token);
  if (auto a = parse_angle(t)) return *a;
  ConfigValue v;
  v.kind = ConfigValue::Kind::Number;
  char* end = nullptr;
  v.number = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v.number))
    throw ConfigError("not a number: '" + t + "'");
  v.text = t;
  return v;
}

std::string ConfigValue::canonical() const {
  switch (kind) {
    case Kind::String:
      return "\"" + text + "\"";
    case Kind::Number: {
      if (pi_multiple) return pi_multiple->str() + "*pi";
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", number);
      return buf;
    }
    case Kind::Array: {
      std::string s = "[";
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) s += ",";
        s += items[i].canonical();
      }
      return s + "]";
    }
  }
  return {};
}

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section, pending;
  int lineno = 0, start_line = 0;
  auto fail = [&](int ln, const std::string& msg) {
    throw ConfigError(origin + ":" + std::to_string(ln) + ": " + msg);
  };
  auto depth_of = [](const std::string& s) {
    int d = 0;
    bool in_str = false;
    for (char ch : s) {
      if (ch == '"') in_str = !in_str;
      if (!in_str && ch == '[') ++d;
      if (!in_str && ch == ']') --d;
    }
    return d;
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(strip_comment(line));
    if (!pending.empty()) {
      pending += " " + s;
      if (depth_of(pending) > 0) continue;
      s = pending;
      pending.clear();
    } else {
      if (s.empty()) continue;
      start_line = lineno;
      if (s.front() == '[' && s.find('=') == std::string::npos) {
        if (s.back() != ']') fail(lineno, "bad section header");
        section = trim(s.substr(1, s.size() - 2));
        if (section.empty()) fail(lineno, "empty section name");
        cfg.data_[section];
        continue;
      }
      if (depth_of(s) > 0) {
        pending = s;
        continue;
      }
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(start_line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) fail(start_line, "empty key");
    if (cfg.has(section, key)) fail(start_line, "duplicate key '" + key + "'");
    try {
      cfg.data_[section][key] = parse_value(s.substr(eq + 1));
    } catch (const ConfigError& e) {
      fail(start_line, e.what());
    } catch (const DomainError& e) {
      fail(start_line, e.what());
    }
  }
  if (!pending.empty()) fail(start_line, "unterminated array");
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

bool Config::has(const std::string& section) const { return data_.count(section) > 0; }

bool Config::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

const ConfigValue* Config::find(const std::string& section,
                                const std::string& key) const {
  const auto s = data_.find(section);
  if (s == data_.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

std::optional<double> Config::number(const std::string& section,
                                     const std::string& key) const {
  const auto* v = find(section, key);
  if (!v) return std::nullopt;
  if (v->kind != ConfigValue::Kind::Number)
    throw ConfigError("[" + section + "] " + key + ": expected a number");
  return v->number;
}

double Config::number(const std::string& section, const std::string& key,
                      double def) const {
  return number(section, key).value_or(def);
}

std::int64_t Config::integer(const std::string& section, const std::string& key,
                             std::int64_t def) const {
  const auto v = number(section, key);
  if (!v) return def;
  if (std::floor(*v) != *v || std::fabs(*v) > 9.0e15)
    throw ConfigError("[" + section + "] " + key + ": expected an integer");
  return std::int64_t(*v);
}

std::string Config::string(const std::string& section, const std::string& key,
                           const std::string& def) const {
  const auto* v = find(section, key);
  if (!v) return def;
  if (v->kind != ConfigValue::Kind::String)
    throw ConfigError("[" + section + "] " + key + ": expected a string");
  return v->text;
}

bool Config::boolean(const std::string& section, const std::string& key,
                     bool def) const {
  const auto* v = find(section, key);
  if (!v) return def;
  if (v->kind == ConfigValue::Kind::String) {
    if (v->text == "true") return true;
    if (v->text == "false") return false;
  }
  throw ConfigError("[" + section + "] " + key + ": expected true or false");
}

void Config::set(const std::string& section, const std::string& key, ConfigValue v) {
  data_[section][key] = std::move(v);
}

void Config::require_keys(const std::string& section,
                          const std::vector<std::string>& allowed) const {
  const auto s = data_.find(section);
  if (s == data_.end()) return;
  for (const auto& [k, v] : s->second) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == k;
    if (!ok) throw ConfigError("unknown key '" + k + "' in [" + section + "]");
  }
}

std::vector<std::string> Config::sections() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : data_) out.push_back(k);
  return out;
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [sec, kv] : data_) {
    out += "[" + sec + "]\n";
    for (const auto& [k, v] : kv) out += k + "=" + v.canonical() + "\n";
  }
  return out;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw NumericError("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

}  // namespace spiraldim
