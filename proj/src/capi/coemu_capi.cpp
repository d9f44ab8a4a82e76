#include "coemu/coemu.h"

#include <algorithm>
#include <iostream>
#include <new>
#include <string>

#include "codec/transaction.hpp"
#include "common/error.hpp"
#include "runner/bench.hpp"
#include "runner/config.hpp"
#include "runner/session.hpp"

struct coemu_config {
  coemu::runner::RunConfig cfg;
};

struct coemu_result {
  coemu::runner::RunResult run;
  std::string report;
  std::string coverage;
};

struct coemu_bench_result {
  coemu::runner::BenchResult bench;
  std::string csv;
  std::string table;
};

namespace {

thread_local std::string g_last_error;

coemu_status status_for(const coemu::Error& e) {
  using coemu::ErrorKind;
  switch (e.kind()) {
    case ErrorKind::kConfig:
    case ErrorKind::kMap:
      return COEMU_ERR_CONFIG;
    case ErrorKind::kUsage:
      return COEMU_ERR_USAGE;
    case ErrorKind::kTransport:
    case ErrorKind::kFraming:
      return COEMU_ERR_TRANSPORT;
    case ErrorKind::kCodec:
      return COEMU_ERR_CODEC;
    case ErrorKind::kProtocol:
    case ErrorKind::kRemote:
      return COEMU_ERR_PROTOCOL;
    default:
      return COEMU_ERR_INTERNAL;
  }
}

template <class Fn>
coemu_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return COEMU_OK;
  } catch (const coemu::Error& e) {
    g_last_error = e.what();
    return status_for(e);
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return COEMU_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return COEMU_ERR_INTERNAL;
  }
}

coemu_status invalid(const char* what) {
  g_last_error = what;
  return COEMU_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* coemu_version(void) { return "0.1.0"; }

const char* coemu_last_error(void) { return g_last_error.c_str(); }

coemu_status coemu_config_create(coemu_config** out) {
  if (out == nullptr) return invalid("null output pointer");
  return guarded([&] { *out = new coemu_config(); });
}

void coemu_config_destroy(coemu_config* cfg) { delete cfg; }

coemu_status coemu_config_set(coemu_config* cfg, const char* key, const char* value) {
  if (cfg == nullptr || key == nullptr || value == nullptr) return invalid("null argument");
  return guarded([&] { coemu::runner::apply_setting(cfg->cfg, key, value); });
}

coemu_status coemu_config_load(coemu_config* cfg, const char* path) {
  if (cfg == nullptr || path == nullptr) return invalid("null argument");
  return guarded([&] { coemu::runner::load_config_file(cfg->cfg, path); });
}

coemu_status coemu_run(const coemu_config* cfg, coemu_result** out) {
  if (cfg == nullptr || out == nullptr) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    auto* r = new coemu_result();
    try {
      r->run = coemu::runner::run_test(cfg->cfg);
    } catch (...) {
      delete r;
      throw;
    }
    r->report = r->run.report();
    r->coverage = r->run.coverage.report();
    *out = r;
  });
}

void coemu_result_destroy(coemu_result* r) { delete r; }
int coemu_result_exit_code(const coemu_result* r) { return r ? r->run.exit_code : coemu::runner::kExitUsage; }
const char* coemu_result_report(const coemu_result* r) { return r ? r->report.c_str() : ""; }
const char* coemu_result_coverage(const coemu_result* r) { return r ? r->coverage.c_str() : ""; }
uint64_t coemu_result_cycles(const coemu_result* r) { return r ? r->run.cycles : 0; }
uint64_t coemu_result_transactions(const coemu_result* r) { return r ? r->run.transactions : 0; }
uint64_t coemu_result_errors(const coemu_result* r) { return r ? r->run.summary.errors : 0; }
double coemu_result_wall_seconds(const coemu_result* r) { return r ? r->run.wall_seconds : 0.0; }
size_t coemu_result_txn_log_size(const coemu_result* r) { return r ? r->run.txn_log.size() : 0; }

const char* coemu_result_txn_log_line(const coemu_result* r, size_t index) {
  if (r == nullptr || index >= r->run.txn_log.size()) return nullptr;
  return r->run.txn_log[index].c_str();
}

coemu_status coemu_bench(const coemu_config* cfg, const uint32_t* gate_factors, size_t count,
                         coemu_bench_result** out) {
  if (cfg == nullptr || out == nullptr || (gate_factors == nullptr && count > 0)) return invalid("null argument");
  if (count == 0) return invalid("no gate factors");
  *out = nullptr;
  return guarded([&] {
    auto* b = new coemu_bench_result();
    try {
      b->bench = coemu::runner::bench(cfg->cfg, std::vector<std::uint32_t>(gate_factors, gate_factors + count));
    } catch (...) {
      delete b;
      throw;
    }
    b->csv = b->bench.csv();
    b->table = b->bench.table();
    *out = b;
  });
}

void coemu_bench_destroy(coemu_bench_result* b) { delete b; }
const char* coemu_bench_csv(const coemu_bench_result* b) { return b ? b->csv.c_str() : ""; }
const char* coemu_bench_table(const coemu_bench_result* b) { return b ? b->table.c_str() : ""; }
int coemu_bench_valid(const coemu_bench_result* b) { return b && b->bench.functional_match ? 1 : 0; }

coemu_status coemu_hdl_serve(const coemu_config* cfg, const char* listen, int once) {
  if (cfg == nullptr || listen == nullptr) return invalid("null argument");
  return guarded([&] {
    auto rc = cfg->cfg;
    coemu::runner::apply_test_defaults(rc);
    coemu::runner::serve_hdl(rc.hdl, listen, once != 0, &std::cerr);
  });
}

coemu_status coemu_pack_reg(const coemu_reg_packet* p, uint8_t* out, size_t out_len) {
  if (p == nullptr || out == nullptr) return invalid("null argument");
  if (out_len < COEMU_REG_PACKET_BYTES) return invalid("output buffer shorter than COEMU_REG_PACKET_BYTES");
  return guarded([&] {
    coemu::codec::RegPacket rp{p->req, p->eop, p->addr, p->data, p->be, p->r_req, p->r_data, p->r_opc};
    const auto bits = coemu::codec::pack_reg(rp);
    const auto& bytes = bits.bytes();
    std::copy(bytes.begin(), bytes.end(), out);
  });
}

coemu_status coemu_unpack_reg(const uint8_t* in, size_t in_len, coemu_reg_packet* out) {
  if (in == nullptr || out == nullptr) return invalid("null argument");
  return guarded([&] {
    const auto bits = coemu::codec::PackedBits::from_bytes(coemu::codec::kRegPacketWidth, {in, in_len});
    const auto rp = coemu::codec::unpack_reg(bits);
    *out = coemu_reg_packet{rp.req, rp.eop, rp.addr, rp.data, rp.be, rp.r_req, rp.r_data, rp.r_opc};
  });
}

}  // extern "C"
