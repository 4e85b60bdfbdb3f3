#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace synthpanel {
namespace csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // throws MissingColumn
  bool has_column(const std::string& name) const;
};

Table read_file(const std::filesystem::path& path, char delimiter = ',');

// Locale-independent numeric parsing ('.' decimal separator only).
double parse_double(const std::string& cell, const std::string& context);
long parse_long(const std::string& cell, const std::string& context);

// Formats a double with the given significant digits; shortest round-trip
// form when digits <= 0.
std::string format_double(double value, int significant_digits);

// Writes content to path atomically (temp file in the same directory, then
// rename), so an interrupted run never leaves a partial file at the final path.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// FNV-1a 64-bit digest of a file's bytes, hex-encoded (manifest bookkeeping).
std::string file_digest(const std::filesystem::path& path);
std::string string_digest(const std::string& bytes);

}  // namespace csv
}  // namespace synthpanel
