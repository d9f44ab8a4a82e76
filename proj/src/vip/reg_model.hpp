#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "codec/transaction.hpp"
#include "dut/isp_regs.hpp"
#include "uvm/report.hpp"
#include "vip/proxies.hpp"

namespace coemu::vip {

/// Front-door register abstraction with a mirror of the expected DUT value.
/// Accesses run through a register agent's sequencer.
class RegModel {
 public:
  enum class Access : std::uint8_t { kRW, kRO };

  struct Register {
    std::string name;
    std::uint32_t address = 0;
    std::uint32_t reset = 0;
    std::uint32_t rw_mask = 0xFFFFFFFF;
    Access access = Access::kRW;
    std::uint32_t mirror = 0;
  };

  explicit RegModel(std::string name = "regmodel") : name_(std::move(name)) {}

  /// Addresses must be word aligned and unique; names unique.
  void add_register(std::string name, std::uint32_t address, std::uint32_t reset, Access access,
                    std::uint32_t rw_mask = 0xFFFFFFFF);

  void set_sequencer(RegSequencer* sequencer) { sequencer_ = sequencer; }
  void set_reporter(uvm::Reporter* reporter) { reporter_ = reporter; }
  /// When on, a read returning something other than the mirror is an error.
  void set_check_on_read(bool on) { check_on_read_ = on; }

  codec::ResponseOpcode write(const std::string& name, std::uint32_t value);
  std::uint32_t read(const std::string& name, codec::ResponseOpcode* status = nullptr);

  std::uint32_t mirror(const std::string& name) const { return find(name).mirror; }
  const Register& reg(const std::string& name) const { return find(name); }
  const std::vector<Register>& registers() const noexcept { return regs_; }
  std::uint64_t mismatches() const noexcept { return mismatches_; }
  void reset();

  /// ENABLE..VERSION for each of `chain_length` IPs, named "ip<i>.<REG>".
  static RegModel isp_map(std::uint32_t base, std::size_t chain_length, const dut::IspConfig& reset_values);
  /// `count` words named "r<index>" starting at `base`.
  static RegModel regfile_map(std::uint32_t base, std::size_t count = dut::kRegFileWords);

 private:
  Register& find(const std::string& name);
  const Register& find(const std::string& name) const;
  codec::RegPacket execute(const codec::RegPacket& req);

  std::string name_;
  std::vector<Register> regs_;
  std::map<std::string, std::size_t> by_name_;
  std::map<std::uint32_t, std::size_t> by_address_;
  RegSequencer* sequencer_ = nullptr;
  uvm::Reporter* reporter_ = nullptr;
  bool check_on_read_ = true;
  std::uint64_t mismatches_ = 0;
};

}  // namespace coemu::vip
