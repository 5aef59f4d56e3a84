#include "mbltool/csv.hpp"

#include <charconv>
#include <cmath>

namespace mbltool {

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << "\n"; }

void CsvWriter::provenance(const std::string& command, std::uint64_t seed,
                           std::uint64_t config_hash) {
  comment("mbl 0.1.0");
  comment("command=" + command);
  comment("seed=" + std::to_string(seed));
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(config_hash));
  comment(std::string("config_hash=") + hex);
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

std::string CsvWriter::format(double value) {
  if (std::isnan(value)) return "";
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

std::string CsvWriter::format(std::int64_t value) { return std::to_string(value); }

std::string CsvWriter::format(std::uint64_t value) { return std::to_string(value); }

std::string CsvWriter::format(bool value) { return value ? "1" : "0"; }

}  // namespace mbltool
