#include "mbltool/config.hpp"

#include <fstream>
#include <sstream>

namespace mbltool {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str(), path);
}

ConfigFile ConfigFile::parse_text(const std::string& text,
                                  const std::string& path) {
  ConfigFile cfg;
  cfg.sections_.push_back({"", {}});
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']')
        throw ConfigError(path, lineno, "unterminated section header");
      const std::string name = trim(stripped.substr(1, stripped.size() - 2));
      if (name.empty()) throw ConfigError(path, lineno, "empty section name");
      cfg.sections_.push_back({name, {}});
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path, lineno, "expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw ConfigError(path, lineno, "empty key");
    cfg.sections_.back().entries.emplace_back(key, value);
  }
  return cfg;
}

std::string ConfigFile::serialize() const {
  std::string out;
  for (const auto& section : sections_) {
    if (!section.name.empty()) out += "[" + section.name + "]\n";
    for (const auto& [key, value] : section.entries)
      out += key + " = " + value + "\n";
  }
  return out;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  return find(section, key).has_value();
}

std::optional<std::string> ConfigFile::find(const std::string& section,
                                            const std::string& key) const {
  for (const auto& s : sections_) {
    if (s.name != section) continue;
    for (const auto& [k, v] : s.entries)
      if (k == key) return v;
  }
  return std::nullopt;
}

std::string ConfigFile::get_string(const std::string& section,
                                   const std::string& key,
                                   const std::string& fallback) const {
  return find(section, key).value_or(fallback);
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
  const auto v = find(section, key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    const double parsed = std::stod(*v, &used);
    if (used != v->size()) throw std::invalid_argument("trailing characters");
    return parsed;
  } catch (const std::exception&) {
    throw std::runtime_error("config value [" + section + "] " + key +
                             " is not a number: " + *v);
  }
}

std::int64_t ConfigFile::get_int(const std::string& section,
                                 const std::string& key,
                                 std::int64_t fallback) const {
  const auto v = find(section, key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    const long long parsed = std::stoll(*v, &used);
    if (used != v->size()) throw std::invalid_argument("trailing characters");
    return parsed;
  } catch (const std::exception&) {
    throw std::runtime_error("config value [" + section + "] " + key +
                             " is not an integer: " + *v);
  }
}

std::vector<double> ConfigFile::get_double_list(
    const std::string& section, const std::string& key,
    const std::vector<double>& fallback) const {
  const auto v = find(section, key);
  if (!v) return fallback;
  std::vector<double> values;
  if (trim(*v).empty()) return values;  // explicit empty list
  std::string token;
  std::istringstream in(*v);
  while (std::getline(in, token, ',')) {
    try {
      values.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw std::runtime_error("config value [" + section + "] " + key +
                               " has a non-numeric element: " + token);
    }
  }
  return values;
}

void ConfigFile::set(const std::string& section, const std::string& key,
                     const std::string& value) {
  for (auto& s : sections_) {
    if (s.name != section) continue;
    for (auto& [k, v] : s.entries) {
      if (k == key) {
        v = value;
        return;
      }
    }
    s.entries.emplace_back(key, value);
    return;
  }
  sections_.push_back({section, {{key, value}}});
}

std::uint64_t config_hash(const std::string& canonical) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : canonical) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

}  // namespace mbltool
