// vortmix <subcommand> --config <file> [--seed n] [--out dir] [--workers n]

#include <cstdint>
#include <cstdio>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "vortmix/vortmix.h"

namespace {

int report(int status, const char* what) {
  std::fprintf(stderr, "vortmix: %s: %s\n", what, vm_last_error());
  return vm_exit_code(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic 2D Navier-Stokes experiments"};
  app.set_version_flag("--version", vm_version());
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string kvector_file;
  std::uint64_t seed = 0;
  const unsigned hw = std::thread::hardware_concurrency();
  int workers = hw == 0 ? 1 : static_cast<int>(hw);

  for (std::size_t i = 0; i < vm_subcommand_count(); ++i) {
    const std::string name = vm_subcommand_name(i);
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--seed", seed, "master seed (overrides the config)");
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    if (name == "partition") {
      sub->add_option("--kvector", kvector_file, "classify this k-vector file");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const auto* chosen = app.get_subcommands().front();
  vm_config* config = nullptr;
  int status = vm_config_load(config_path.c_str(), &config);
  if (status != VM_OK) return report(status, "config");

  vm_run_options opts;
  vm_run_options_init(&opts);
  opts.workers = workers;
  if (chosen->count("--seed") > 0) {
    opts.has_seed = 1;
    opts.seed = seed;
  }
  opts.out_dir = out_dir.c_str();
  opts.kvector_file = kvector_file.c_str();
  status = vm_run(chosen->get_name().c_str(), config, &opts);
  vm_config_free(config);
  if (status != VM_OK) return report(status, chosen->get_name().c_str());
  return 0;
}
