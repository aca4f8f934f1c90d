#include "io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "vortmix/error.hpp"
#include "vortmix/runner.hpp"

namespace vortmix {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path, std::initializer_list<std::string_view> header)
    : path_(path), out_(path, std::ios::binary), columns_(header.size()) {
  if (!out_) throw Error(ErrorCode::kIo, "cannot write " + path);
  bool first = true;
  for (auto name : header) {
    if (!first) out_ << ',';
    out_ << name;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::write_cell(const CsvCell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    out_ << format_double(*d);
  } else if (const auto* i = std::get_if<std::int64_t>(&cell)) {
    out_ << *i;
  } else if (const auto* b = std::get_if<bool>(&cell)) {
    out_ << (*b ? "true" : "false");
  } else {
    const auto& s = std::get<std::string>(cell);
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
      out_ << s;
    } else {
      out_ << '"';
      for (char c : s) {
        if (c == '"') out_ << '"';
        out_ << c;
      }
      out_ << '"';
    }
  }
}

void CsvWriter::row(std::initializer_list<CsvCell> cells) {
  if (cells.size() != columns_) throw Error(ErrorCode::kInternal, "CSV row width mismatch in " + path_);
  bool first = true;
  for (const auto& cell : cells) {
    if (!first) out_ << ',';
    write_cell(cell);
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw Error(ErrorCode::kIo, "failed writing " + path_);
}

void write_summary(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& values) {
  std::ofstream out(path, std::ios::binary);
  for (const auto& [key, value] : values) out << key << '=' << value << '\n';
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
}

void write_manifest(const std::string& path, const std::string& subcommand, const RunConfig& config,
                    std::uint64_t seed) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config.hash()));
  std::vector<std::pair<std::string, std::string>> lines{
      {"version", kVersion},
      {"subcommand", subcommand},
      {"seed", std::to_string(seed)},
      {"config_hash", hash},
  };
  for (auto& [key, value] : config.flattened()) lines.emplace_back("config." + key, value);
  write_summary(path, lines);
}

}  // namespace vortmix
