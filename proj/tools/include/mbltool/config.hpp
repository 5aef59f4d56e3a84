#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mbltool {

/// Parse failure with the offending location; the CLI reports
/// "<path>:<line>: <what>".
struct ConfigError : std::runtime_error {
  ConfigError(std::string path_in, int line_in, const std::string& message)
      : std::runtime_error(path_in + ":" + std::to_string(line_in) + ": " + message),
        path(std::move(path_in)),
        line(line_in) {}
  std::string path;
  int line;
};

/// Flat key=value configuration with [section] headers and '#' comments.
/// Order is preserved so a config round-trips losslessly through
/// serialize().
class ConfigFile {
 public:
  ConfigFile() = default;

  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_text(const std::string& text, const std::string& path);

  std::string serialize() const;

  bool has(const std::string& section, const std::string& key) const;
  std::optional<std::string> find(const std::string& section,
                                  const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  std::int64_t get_int(const std::string& section, const std::string& key,
                       std::int64_t fallback) const;
  std::vector<double> get_double_list(const std::string& section,
                                      const std::string& key,
                                      const std::vector<double>& fallback) const;

  void set(const std::string& section, const std::string& key,
           const std::string& value);

 private:
  struct Section {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
  };
  std::vector<Section> sections_;
};

/// FNV-1a over the canonical serialized config; stamped into CSV headers.
std::uint64_t config_hash(const std::string& canonical);

}  // namespace mbltool
