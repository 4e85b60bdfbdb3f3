#include "synthpanel/csv.hpp"

#include <algorithm>
#include <array>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

#include "synthpanel/errors.hpp"

namespace synthpanel {
namespace csv {

std::size_t Table::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end())
    throw validation_error("MissingColumn", "column '" + name + "' not found");
  return static_cast<std::size_t>(it - header.begin());
}

bool Table::has_column(const std::string& name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, delimiter)) cells.push_back(cell);
  if (!line.empty() && line.back() == delimiter) cells.emplace_back();
  return cells;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

Table read_file(const std::filesystem::path& path, char delimiter) {
  std::ifstream in(path);
  if (!in)
    throw validation_error("FileNotFound", "cannot open '" + path.string() + "'");
  Table table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    auto cells = split_line(line, delimiter);
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != table.header.size())
        throw validation_error(
            "RaggedRow", path.string() + ": row with " + std::to_string(cells.size()) +
                             " cells, expected " + std::to_string(table.header.size()));
      table.rows.push_back(std::move(cells));
    }
  }
  if (first)
    throw validation_error("EmptyFile", path.string() + " has no header row");
  return table;
}

double parse_double(const std::string& cell, const std::string& context) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end)
    throw validation_error("NonNumericValue",
                           context + ": '" + cell + "' is not a number");
  return value;
}

long parse_long(const std::string& cell, const std::string& context) {
  long value = 0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end)
    throw validation_error("NonNumericValue",
                           context + ": '" + cell + "' is not an integer");
  return value;
}

std::string format_double(double value, int significant_digits) {
  std::array<char, 64> buf{};
  if (significant_digits <= 0) {
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
  }
  const int n = std::snprintf(buf.data(), buf.size(), "%.*g", significant_digits, value);
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto dir = path.parent_path().empty() ? std::filesystem::path(".")
                                              : path.parent_path();
  std::filesystem::create_directories(dir);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw runtime_error("WriteFailed", "cannot open '" + tmp + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw runtime_error("WriteFailed", "short write to '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw runtime_error("WriteFailed",
                        "rename to '" + path.string() + "' failed: " + ec.message());
  }
}

std::string string_digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf.data(), 16);
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw runtime_error("FileNotFound", "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return string_digest(ss.str());
}

}  // namespace csv
}  // namespace synthpanel
