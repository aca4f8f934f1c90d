#include "vortmix/vortmix.h"

#include <fstream>
#include <new>
#include <string>

#include "vortmix/partition.hpp"
#include "vortmix/runner.hpp"
#include "vortmix/spectral.hpp"

struct vm_config {
  vortmix::RunConfig config;
};

struct vm_partition {
  vortmix::IntervalPartition partition;
};

struct vm_field {
  vortmix::VorticityField field;
};

namespace {

thread_local std::string last_error;

template <typename Body>
int guarded(Body&& body) {
  try {
    body();
    last_error.clear();
    return VM_OK;
  } catch (const vortmix::Error& e) {
    last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return VM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return VM_ERR_INTERNAL;
  }
}

int null_argument(const char* what) {
  last_error = std::string(what) + " must not be NULL";
  return VM_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* vm_version(void) { return vortmix::kVersion; }

const char* vm_last_error(void) { return last_error.c_str(); }

int vm_exit_code(int status) {
  if (status < 0 || status > VM_ERR_INTERNAL) return 4;
  return vortmix::exit_code_for(static_cast<vortmix::ErrorCode>(status));
}

int vm_config_load(const char* path, vm_config** out) {
  if (!path || !out) return null_argument("path and out");
  *out = nullptr;
  return guarded([&] { *out = new vm_config{vortmix::load_config(path)}; });
}

int vm_config_parse(const char* json, const char* base_dir, vm_config** out) {
  if (!json || !out) return null_argument("json and out");
  *out = nullptr;
  return guarded([&] { *out = new vm_config{vortmix::parse_config(json, base_dir ? base_dir : "")}; });
}

void vm_config_free(vm_config* config) { delete config; }

uint64_t vm_config_hash(const vm_config* config) { return config ? config->config.hash() : 0; }

void vm_run_options_init(vm_run_options* options) {
  if (!options) return;
  *options = vm_run_options{1, 0, 0, nullptr, nullptr};
}

size_t vm_subcommand_count(void) { return vortmix::subcommands().size(); }

const char* vm_subcommand_name(size_t index) {
  const auto& names = vortmix::subcommands();
  return index < names.size() ? names[index].c_str() : nullptr;
}

int vm_run(const char* subcommand, const vm_config* config, const vm_run_options* options) {
  if (!subcommand || !config) return null_argument("subcommand and config");
  return guarded([&] {
    vortmix::RunOptions opts;
    if (options) {
      opts.workers = options->workers;
      if (options->has_seed) opts.seed = options->seed;
      if (options->out_dir) opts.out_dir = options->out_dir;
      if (options->kvector_file) opts.kvector_file = options->kvector_file;
    }
    vortmix::run_subcommand(subcommand, config->config, opts);
  });
}

int vm_partition_classify(const int* k, size_t n, int T, double beta, double beta_prime, double R,
                          vm_partition** out) {
  if ((!k && n > 0) || !out) return null_argument("k and out");
  *out = nullptr;
  return guarded([&] {
    const vortmix::PartitionParams params{T, beta, beta_prime, R};
    params.validate();
    const vortmix::KVector kv(std::vector<int>(k, k + n));
    *out = new vm_partition{vortmix::classify(kv, params)};
  });
}

size_t vm_partition_block_count(const vm_partition* partition) {
  return partition ? partition->partition.blocks.size() : 0;
}

int vm_partition_block(const vm_partition* partition, size_t index, int* start, int* end, int* large) {
  if (!partition) return null_argument("partition");
  if (index >= partition->partition.blocks.size()) {
    last_error = "block index out of range";
    return VM_ERR_INVALID_ARGUMENT;
  }
  const auto& b = partition->partition.blocks[index];
  if (start) *start = b.span.start;
  if (end) *end = b.span.end;
  if (large) *large = b.label == vortmix::BlockLabel::kLarge;
  return VM_OK;
}

void vm_partition_free(vm_partition* partition) { delete partition; }

int vm_field_read(const char* path, vm_field** out) {
  if (!path || !out) return null_argument("path and out");
  *out = nullptr;
  return guarded([&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw vortmix::Error(vortmix::ErrorCode::kIo, std::string("cannot open ") + path);
    *out = new vm_field{vortmix::read_vort1(in)};
  });
}

int vm_field_kmax(const vm_field* field) { return field ? field->field.grid().kmax() : 0; }

double vm_field_enstrophy(const vm_field* field) {
  return field ? vortmix::l2_norm_sq(field->field) : 0.0;
}

double vm_field_h1(const vm_field* field) { return field ? vortmix::h1_seminorm_sq(field->field) : 0.0; }

void vm_field_free(vm_field* field) { delete field; }

}  // extern "C"
