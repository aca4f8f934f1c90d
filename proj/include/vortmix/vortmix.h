#ifndef VORTMIX_H
#define VORTMIX_H

/* C interface to the vortmix library. Every call returns a status code; on
 * failure vm_last_error() holds a message for the calling thread. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define VM_API __attribute__((visibility("default")))
#else
#define VM_API
#endif

enum {
  VM_OK = 0,
  VM_ERR_INVALID_ARGUMENT = 1,
  VM_ERR_GRID_TOO_LARGE = 2,
  VM_ERR_NONFINITE_STATE = 3,
  VM_ERR_PRECONDITION = 4,
  VM_ERR_MISSING_NOISE_LOG = 5,
  VM_ERR_SAMPLING_TOO_COARSE = 6,
  VM_ERR_ALIGNMENT = 7,
  VM_ERR_CONFIG = 8,
  VM_ERR_IO = 9,
  VM_ERR_INTERNAL = 10
};

typedef struct vm_config vm_config;
typedef struct vm_partition vm_partition;
typedef struct vm_field vm_field;

VM_API const char* vm_version(void);
VM_API const char* vm_last_error(void);
/* Process exit code for a status: 0 ok, 1 config/argument, 2 blow-up, 3 I/O, 4 other. */
VM_API int vm_exit_code(int status);

VM_API int vm_config_load(const char* path, vm_config** out);
/* base_dir resolves relative file names inside the config; may be NULL. */
VM_API int vm_config_parse(const char* json, const char* base_dir, vm_config** out);
VM_API void vm_config_free(vm_config* config);
VM_API uint64_t vm_config_hash(const vm_config* config);

typedef struct {
  int workers;              /* >= 1 */
  int has_seed;             /* nonzero: seed overrides master_seed */
  uint64_t seed;
  const char* out_dir;      /* NULL or "": output_dir from the config */
  const char* kvector_file; /* partition only; NULL or "" to use the config */
} vm_run_options;

VM_API void vm_run_options_init(vm_run_options* options);

VM_API size_t vm_subcommand_count(void);
VM_API const char* vm_subcommand_name(size_t index);
VM_API int vm_run(const char* subcommand, const vm_config* config, const vm_run_options* options);

/* k[n - 1] = k_n; n must be a positive multiple of T. */
VM_API int vm_partition_classify(const int* k, size_t n, int T, double beta, double beta_prime,
                                 double R, vm_partition** out);
VM_API size_t vm_partition_block_count(const vm_partition* partition);
VM_API int vm_partition_block(const vm_partition* partition, size_t index, int* start, int* end,
                              int* large);
VM_API void vm_partition_free(vm_partition* partition);

/* VORT1 snapshot access. */
VM_API int vm_field_read(const char* path, vm_field** out);
VM_API int vm_field_kmax(const vm_field* field);
VM_API double vm_field_enstrophy(const vm_field* field);
VM_API double vm_field_h1(const vm_field* field);
VM_API void vm_field_free(vm_field* field);

#ifdef __cplusplus
}
#endif

#endif
