#pragma once

// Run configuration loaded from a JSON document; see docs/config.md for the
// schema. Every block is optional and falls back to the defaults below, but
// unknown keys anywhere are rejected.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vortmix {

struct GridConfig {
  int kmax = 8;
  int n_force = 2;
};

struct ForcingConfig {
  double R = 1.0;
  std::string covariance_file;  // "k1 k2 gamma" lines; empty for uniform
};

struct IntegratorConfig {
  double dt = 1e-3;
  double t_end = 10.0;
};

// Initial field: read from a VORT1 file, or a Gaussian field rescaled to the
// given ||w||^2 (0 gives the zero field).
struct InitialConfig {
  double enstrophy = 0.0;
  double high_enstrophy = 0.0;  // extra high-mode-only perturbation, couple only
  std::string file;
};

struct SimulateConfig {
  double output_interval = 0.1;
  bool snapshots = true;
};

struct CoupleConfig {
  double t_end = 200.0;
  InitialConfig second{4.0, 0.0, ""};
  int resamples = 200;
};

struct ReduceConfig {
  double t_end = 2.0;
  int splits = 50;
  int pairs = 10;
  double l_enstrophy = 1.0;
  double slack = 1e-3;
};

struct GirsanovConfig {
  double t_end = 0.2;
  std::size_t paths = 10000;
  double clip = 0.0;
};

struct DiagnosticsConfig {
  std::size_t ensemble = 1000;
  std::vector<int> moment_times{1, 2, 4};
  std::vector<double> thresholds{4.0, 8.0, 16.0};  // multiples of R
  int t = 1;  // D_n summed over n = t .. t_prime - 1
  int t_prime = 5;
  std::vector<double> betas{1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
  int resamples = 1000;
};

struct PartitionConfig {
  int T = 2;
  double beta = 6.0;
  double beta_prime = 3.0;
  std::string kvector_file;  // classify this instead of a simulated path
};

struct MixingConfig {
  double burn_in = 10.0;
  double gap = 0.1;
  std::size_t samples = 2000;
  int seeds = 2;
  std::vector<double> lags{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  std::pair<int, int> mode{1, 0};
  std::size_t block_length = 100;
  int resamples = 200;
};

struct RunConfig {
  GridConfig grid;
  ForcingConfig forcing;
  IntegratorConfig integrator;
  InitialConfig initial;
  SimulateConfig simulate;
  CoupleConfig couple;
  ReduceConfig reduce;
  GirsanovConfig girsanov;
  DiagnosticsConfig diagnostics;
  PartitionConfig partition;
  MixingConfig mixing;
  std::uint64_t master_seed = 1;
  std::string output_dir = "out";

  // Directory of the config file; relative paths inside it resolve against this.
  std::string base_dir;

  // Times used by `subcommand` must be multiples of integrator.dt;
  // Error(kConfig) naming the field otherwise.
  void check_times(const std::string& subcommand) const;

  // Canonical JSON of every field (defaults filled in), used for the manifest.
  std::string canonical_json() const;
  // Flattened "block.key" -> value lines of canonical_json().
  std::vector<std::pair<std::string, std::string>> flattened() const;
  std::uint64_t hash() const;
  std::string resolve(const std::string& path) const;
};

// Throws Error(kConfig) naming the offending field.
RunConfig parse_config(const std::string& json_text, const std::string& base_dir = "");
RunConfig load_config(const std::string& path);

}  // namespace vortmix
