#ifndef COEMU_COEMU_H
#define COEMU_COEMU_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define COEMU_API __declspec(dllexport)
#else
#define COEMU_API __attribute__((visibility("default")))
#endif

typedef enum coemu_status {
  COEMU_OK = 0,
  COEMU_ERR_INVALID_ARGUMENT = 1,
  COEMU_ERR_CONFIG = 2,
  COEMU_ERR_USAGE = 3,
  COEMU_ERR_TRANSPORT = 4,
  COEMU_ERR_PROTOCOL = 5,
  COEMU_ERR_CODEC = 6,
  COEMU_ERR_INTERNAL = 7
} coemu_status;

typedef struct coemu_config coemu_config;
typedef struct coemu_result coemu_result;
typedef struct coemu_bench_result coemu_bench_result;

/* Register bus packet, field by field. */
typedef struct coemu_reg_packet {
  uint8_t req;
  uint8_t eop;
  uint32_t addr;
  uint32_t data;
  uint8_t be;
  uint8_t r_req;
  uint32_t r_data;
  uint8_t r_opc;
} coemu_reg_packet;

/* Packed register packet size in bytes (105 bits, MSB first, zero pad). */
#define COEMU_REG_PACKET_BYTES 14

COEMU_API const char* coemu_version(void);
/* Message of the last failed call on this thread; empty if none. */
COEMU_API const char* coemu_last_error(void);

COEMU_API coemu_status coemu_config_create(coemu_config** out);
COEMU_API void coemu_config_destroy(coemu_config* cfg);
/* Same keys as the key=value config file. */
COEMU_API coemu_status coemu_config_set(coemu_config* cfg, const char* key, const char* value);
COEMU_API coemu_status coemu_config_load(coemu_config* cfg, const char* path);

/* Runs the configured test. COEMU_OK means the run happened; check the
   result's exit code for the verdict (0 pass, 1 mismatch, 2 usage/config). */
COEMU_API coemu_status coemu_run(const coemu_config* cfg, coemu_result** out);
COEMU_API void coemu_result_destroy(coemu_result* r);
COEMU_API int coemu_result_exit_code(const coemu_result* r);
COEMU_API const char* coemu_result_report(const coemu_result* r);
COEMU_API const char* coemu_result_coverage(const coemu_result* r);
COEMU_API uint64_t coemu_result_cycles(const coemu_result* r);
COEMU_API uint64_t coemu_result_transactions(const coemu_result* r);
COEMU_API uint64_t coemu_result_errors(const coemu_result* r);
COEMU_API double coemu_result_wall_seconds(const coemu_result* r);
COEMU_API size_t coemu_result_txn_log_size(const coemu_result* r);
COEMU_API const char* coemu_result_txn_log_line(const coemu_result* r, size_t index);

/* One lockstep and one transactional run per gate factor. */
COEMU_API coemu_status coemu_bench(const coemu_config* cfg, const uint32_t* gate_factors, size_t count,
                                   coemu_bench_result** out);
COEMU_API void coemu_bench_destroy(coemu_bench_result* b);
COEMU_API const char* coemu_bench_csv(const coemu_bench_result* b);
COEMU_API const char* coemu_bench_table(const coemu_bench_result* b);
/* Nonzero when every cell passed and all cells were functionally identical. */
COEMU_API int coemu_bench_valid(const coemu_bench_result* b);

/* Serves HVL sessions on host:port with the HDL topology of `cfg`.
   With once != 0, returns after the first session. */
COEMU_API coemu_status coemu_hdl_serve(const coemu_config* cfg, const char* listen, int once);

COEMU_API coemu_status coemu_pack_reg(const coemu_reg_packet* p, uint8_t* out, size_t out_len);
COEMU_API coemu_status coemu_unpack_reg(const uint8_t* in, size_t in_len, coemu_reg_packet* out);

#ifdef __cplusplus
}
#endif

#endif
