#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace mbltool {

/// CSV emission: '.' decimals, LF line endings, '#'-prefixed provenance
/// comments before the mandatory header row. Doubles are printed in
/// shortest round-trip form so identical numbers give identical bytes.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void comment(const std::string& text);
  void provenance(const std::string& command, std::uint64_t seed,
                  std::uint64_t config_hash);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);

  static std::string format(double value);     // empty for NaN
  static std::string format(std::int64_t value);
  static std::string format(std::uint64_t value);
  static std::string format(bool value);       // 1 / 0

 private:
  std::ostream& out_;
};

}  // namespace mbltool
