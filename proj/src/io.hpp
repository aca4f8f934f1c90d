#pragma once

// CSV and manifest output for the runners.

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vortmix/config.hpp"

namespace vortmix {

// Shortest round-trip decimal form; "nan", "inf", "-inf" for nonfinite values.
std::string format_double(double x);

using CsvCell = std::variant<double, std::int64_t, std::string, bool>;

// RFC 4180 with CRLF-free "\n" line ends; strings are quoted only when needed.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::initializer_list<std::string_view> header);
  void row(std::initializer_list<CsvCell> cells);
  void close();

 private:
  void write_cell(const CsvCell& cell);

  std::string path_;
  std::ofstream out_;
  std::size_t columns_;
};

void write_manifest(const std::string& path, const std::string& subcommand, const RunConfig& config,
                    std::uint64_t seed);

// "key=value" lines.
void write_summary(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& values);

}  // namespace vortmix
