#pragma once

// Subcommand runners shared by the C API and the command-line tool. Each
// writes its report files plus manifest.txt into the output directory.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vortmix/config.hpp"
#include "vortmix/error.hpp"

namespace vortmix {

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides master_seed
  std::string out_dir;                // overrides output_dir
  int workers = 1;
  std::string kvector_file;           // partition only: overrides partition.kvector_file
};

struct RunResult {
  std::string out_dir;
  std::vector<std::string> files;  // written, relative to out_dir
  std::vector<std::pair<std::string, std::string>> summary;
};

const std::vector<std::string>& subcommands();

// Throws Error on failure; NonfiniteStateError for a numerical blow-up.
RunResult run_subcommand(const std::string& name, const RunConfig& config, const RunOptions& options);

// 0 success, 1 configuration or argument error, 2 numerical blow-up, 3 I/O
// error, 4 anything else.
int exit_code_for(ErrorCode code);

}  // namespace vortmix
