#include "riscnoma/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace riscnoma {

std::string trim(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& text) {
  std::string t = trim(text);
  std::string lower = t;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "inf" || lower == "+inf" || lower == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  if (lower == "-inf" || lower == "-infinity") return -std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + t + "'");
  }
  if (pos != t.size()) throw ConfigError("not a number: '" + t + "'");
  return v;
}

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& origin) {
  KeyValueConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
    }
    cfg.set(key, trim(line.substr(eq + 1)));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  entries_[key] = value;
}

bool KeyValueConfig::contains(const std::string& key) const { return entries_.count(key) != 0; }

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  try {
    return parse_double(*v);
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  std::size_t pos = 0;
  long long out = 0;
  try {
    out = std::stoll(*v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an integer: '" + *v + "'");
  }
  if (pos != v->size()) throw ConfigError(key + ": not an integer: '" + *v + "'");
  return out;
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key) const {
  std::vector<double> out;
  const auto v = get(key);
  if (!v) return out;
  for (const auto& item : split_list(*v)) {
    try {
      out.push_back(parse_double(item));
    } catch (const ConfigError& e) {
      throw ConfigError(key + ": " + e.what());
    }
  }
  return out;
}

std::vector<std::string> KeyValueConfig::get_strings(const std::string& key) const {
  const auto v = get(key);
  if (!v) return {};
  return split_list(*v);
}

}  // namespace riscnoma
