#include "vip/reg_model.hpp"

#include <cstdio>

#include "common/error.hpp"

namespace coemu::vip {

namespace {

std::string hex32(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08x", v);
  return buf;
}

}  // namespace

void RegModel::add_register(std::string name, std::uint32_t address, std::uint32_t reset, Access access,
                            std::uint32_t rw_mask) {
  if (address % 4 != 0) throw MapError(name_ + ": register " + name + " at unaligned address " + hex32(address));
  if (by_name_.count(name)) throw MapError(name_ + ": duplicate register name " + name);
  if (by_address_.count(address)) throw MapError(name_ + ": duplicate register address " + hex32(address));
  by_name_[name] = regs_.size();
  by_address_[address] = regs_.size();
  regs_.push_back(Register{std::move(name), address, reset, access == Access::kRO ? 0u : rw_mask, access, reset});
}

RegModel::Register& RegModel::find(const std::string& name) {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw MapError(name_ + ": no register named " + name);
  return regs_[it->second];
}

const RegModel::Register& RegModel::find(const std::string& name) const {
  return const_cast<RegModel*>(this)->find(name);
}

codec::RegPacket RegModel::execute(const codec::RegPacket& req) {
  if (sequencer_ == nullptr) throw ConfigError(name_ + ": register model has no sequencer");
  return sequencer_->execute(req);
}

codec::ResponseOpcode RegModel::write(const std::string& name, std::uint32_t value) {
  Register& r = find(name);
  if (r.access == Access::kRO) throw MapError(name_ + ": " + name + " is read-only");
  codec::RegPacket req;
  req.req = 1;
  req.eop = 1;
  req.addr = r.address;
  req.data = value;
  req.be = 0xF;
  const auto rsp = execute(req);
  const auto opc = static_cast<codec::ResponseOpcode>(rsp.r_opc);
  if (opc == codec::ResponseOpcode::kOk) r.mirror = (r.mirror & ~r.rw_mask) | (value & r.rw_mask);
  return opc;
}

std::uint32_t RegModel::read(const std::string& name, codec::ResponseOpcode* status) {
  Register& r = find(name);
  codec::RegPacket req;
  req.req = 1;
  req.eop = 1;
  req.addr = r.address;
  const auto rsp = execute(req);
  const auto opc = static_cast<codec::ResponseOpcode>(rsp.r_opc);
  if (status) *status = opc;
  if (opc != codec::ResponseOpcode::kOk) return rsp.r_data;
  if (check_on_read_ && rsp.r_data != r.mirror) {
    ++mismatches_;
    if (reporter_) {
      reporter_->error("REG_MIRROR", name_ + "." + name + ": read " + hex32(rsp.r_data) + ", mirror " +
                                         hex32(r.mirror));
    }
  }
  r.mirror = rsp.r_data;
  return rsp.r_data;
}

void RegModel::reset() {
  for (auto& r : regs_) r.mirror = r.reset;
}

RegModel RegModel::isp_map(std::uint32_t base, std::size_t chain_length, const dut::IspConfig& reset_values) {
  RegModel m("isp_regs");
  for (std::size_t i = 0; i < chain_length; ++i) {
    const std::uint32_t ip_base = base + static_cast<std::uint32_t>(i) * dut::kIpStride;
    for (const auto& info : dut::kIspRegs) {
      m.add_register("ip" + std::to_string(i) + "." + info.name, ip_base + info.offset,
                     dut::isp_reset_value(reset_values, info.offset), info.rw_mask ? Access::kRW : Access::kRO,
                     info.rw_mask);
    }
  }
  return m;
}

RegModel RegModel::regfile_map(std::uint32_t base, std::size_t count) {
  RegModel m("regfile");
  for (std::size_t i = 0; i < count; ++i) {
    m.add_register("r" + std::to_string(i), base + static_cast<std::uint32_t>(i) * 4, 0, Access::kRW);
  }
  return m;
}

}  // namespace coemu::vip
