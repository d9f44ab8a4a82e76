#include "dut/models.hpp"

#include "common/error.hpp"

namespace coemu::dut {

namespace {

std::uint32_t byte_mask(std::uint8_t be) {
  std::uint32_t m = 0;
  for (int i = 0; i < 4; ++i) {
    if ((be >> i) & 1u) m |= 0xFFu << (8 * i);
  }
  return m;
}

std::uint32_t merge_write(std::uint32_t old, std::uint32_t data, std::uint8_t be) {
  const std::uint32_t m = byte_mask(be);
  return (old & ~m) | (data & m);
}

constexpr BusSlave::Access kErrorResponse{true, 0, codec::ResponseOpcode::kError};

}  // namespace

BusSlave::BusSlave(hdl::RegBusPins pins, std::uint32_t latency, Handler handler)
    : pins_(pins), latency_(latency), handler_(std::move(handler)) {
  if (latency_ < 1) throw ConfigError("response latency must be >= 1");
}

void BusSlave::eval(hdl::Kernel& k) {
  std::optional<Access> out;
  if (k.in_reset()) {
    pending_.reset();
  } else {
    if (pending_ && --countdown_ == 0) {
      out = pending_;
      pending_.reset();
    }
    if (k.read(pins_.req) == 1 && !pending_) {
      codec::RegPacket req;
      req.req = 1;
      req.eop = static_cast<std::uint8_t>(k.read(pins_.eop));
      req.addr = static_cast<std::uint32_t>(k.read(pins_.addr));
      req.data = static_cast<std::uint32_t>(k.read(pins_.data));
      req.be = static_cast<std::uint8_t>(k.read(pins_.be));
      const Access a = handler_(k, req);
      if (a.respond) {
        if (latency_ == 1) {
          out = a;
        } else {
          pending_ = a;
          countdown_ = latency_ - 1;
        }
      }
    }
    if (!out && spurious_at_ && *spurious_at_ == k.now() + 1) out = BusSlave::Access{};
  }
  if (out) {
    k.write(pins_.r_req, 1);
    k.write(pins_.r_data, out->data);
    k.write(pins_.r_opc, static_cast<std::uint8_t>(out->opc));
    driving_ = true;
  } else if (driving_) {
    k.write(pins_.r_req, 0);
    k.write(pins_.r_data, 0);
    k.write(pins_.r_opc, 0);
    driving_ = false;
  }
}

RegFileDut::RegFileDut(hdl::Kernel& k, const hdl::RegBusPins& pins, const std::string& key, std::uint32_t base,
                       std::uint32_t response_latency)
    : base_(base), slave_(pins, response_latency, [this](hdl::Kernel&, const codec::RegPacket& req) {
        return access(req);
      }) {
  k.register_process(key, [this](hdl::Kernel& kk) { slave_.eval(kk); });
}

BusSlave::Access RegFileDut::access(const codec::RegPacket& req) {
  if (req.addr < base_) return kErrorResponse;
  const std::uint32_t offset = req.addr - base_;
  if (offset >= kRegFileSpan || offset % 4 != 0) return kErrorResponse;
  auto& word = storage_[offset / 4];
  if (req.is_read()) return BusSlave::Access{true, word, codec::ResponseOpcode::kOk};
  word = merge_write(word, req.data, req.be);
  return BusSlave::Access{};
}

IspIpDut::IspIpDut(hdl::Kernel& k, const std::string& name, const hdl::VideoPins& in, const hdl::VideoPins& out,
                   std::uint32_t pipeline_latency, const IspConfig& reset_values)
    : in_(in), out_(out), stages_(pipeline_latency) {
  if (pipeline_latency < 1) throw ConfigError("pipeline latency must be >= 1");
  regs_.enable = k.add_signal(name + ".ENABLE", 1, reset_values.enable & 1u);
  regs_.gain = k.add_signal(name + ".GAIN", 16, reset_values.gain & 0xFFFFu);
  regs_.offset = k.add_signal(name + ".OFFSET", 16, reset_values.offset & 0xFFFFu);
  regs_.clamp_min = k.add_signal(name + ".CLAMP_MIN", 16, reset_values.clamp_min & 0xFFFFu);
  regs_.clamp_max = k.add_signal(name + ".CLAMP_MAX", 16, reset_values.clamp_max & 0xFFFFu);
  irq_ = k.add_signal(name + ".irq", 1);
  k.register_process(name + ".pix", [this](hdl::Kernel& kk) { eval(kk); });
}

std::uint16_t IspIpDut::transfer(std::uint32_t enable, std::uint32_t gain, std::uint32_t offset,
                                 std::uint32_t clamp_min, std::uint32_t clamp_max, std::uint16_t in) {
  if (enable == 0) return in;
  std::int32_t v = static_cast<std::int32_t>((in * gain) >> 8);
  v += static_cast<std::int16_t>(static_cast<std::uint16_t>(offset));
  v = std::min<std::int32_t>(v, static_cast<std::int32_t>(clamp_max));
  v = std::max<std::int32_t>(v, static_cast<std::int32_t>(clamp_min));
  return static_cast<std::uint16_t>(v);
}

void IspIpDut::eval(hdl::Kernel& k) {
  const bool prev_out_valid = k.read(out_.pixel_valid) == 1;
  if (k.in_reset()) {
    for (auto& s : stages_) s = Stage{};
  } else {
    for (std::size_t i = stages_.size() - 1; i > 0; --i) stages_[i] = stages_[i - 1];
    Stage head;
    head.valid = k.read(in_.pixel_valid) == 1;
    if (head.valid) {
      head.frame_start = k.read(in_.frame_start) == 1;
      head.line_start = k.read(in_.line_start) == 1;
      head.data = transfer(static_cast<std::uint32_t>(k.read(regs_.enable)),
                           static_cast<std::uint32_t>(k.read(regs_.gain)),
                           static_cast<std::uint32_t>(k.read(regs_.offset)),
                           static_cast<std::uint32_t>(k.read(regs_.clamp_min)),
                           static_cast<std::uint32_t>(k.read(regs_.clamp_max)),
                           static_cast<std::uint16_t>(k.read(in_.pixel_data)));
    }
    stages_[0] = head;
  }
  const Stage& tail = stages_.back();
  k.write(out_.pixel_valid, tail.valid ? 1 : 0);
  k.write(out_.frame_start, tail.frame_start ? 1 : 0);
  k.write(out_.line_start, tail.line_start ? 1 : 0);
  k.write(out_.pixel_data, tail.data);
  k.write(irq_, prev_out_valid && !tail.valid ? 1 : 0);
}

IspSubsystemDut::IspSubsystemDut(hdl::Kernel& k, const std::string& name, const hdl::RegBusPins& bus,
                                 const hdl::VideoPins& video_in, Params params)
    : params_(params),
      slave_(bus, params.response_latency,
             [this](hdl::Kernel& kk, const codec::RegPacket& req) { return access(kk, req); }) {
  if (params_.chain_length < 1) throw ConfigError("subsystem needs at least one IP");
  stage_pins_.push_back(video_in);
  for (std::uint32_t i = 0; i < params_.chain_length; ++i) {
    const std::string ip_name = name + ".ip" + std::to_string(i);
    stage_pins_.push_back(hdl::make_video_bus(k, ip_name + ".out"));
    ips_.push_back(std::make_unique<IspIpDut>(k, ip_name, stage_pins_[i], stage_pins_[i + 1],
                                              params_.pipeline_latency, params_.reset_values));
  }
  k.register_process(name + ".bus", [this](hdl::Kernel& kk) { slave_.eval(kk); });
}

BusSlave::Access IspSubsystemDut::access(hdl::Kernel& k, const codec::RegPacket& req) {
  // Addresses outside every IP window are not decoded: no response at all.
  if (req.addr < params_.base) return BusSlave::Access{false};
  const std::uint32_t rel = req.addr - params_.base;
  const std::uint32_t index = rel / kIpStride;
  if (index >= ips_.size()) return BusSlave::Access{false};
  const std::uint32_t offset = rel % kIpStride;
  const IspRegInfo* info = nullptr;
  for (const auto& r : kIspRegs) {
    if (r.offset == offset) info = &r;
  }
  if (info == nullptr) return kErrorResponse;

  const auto& regs = ips_[index]->regs();
  hdl::SignalId sig{};
  switch (offset) {
    case kRegEnable: sig = regs.enable; break;
    case kRegGain: sig = regs.gain; break;
    case kRegOffset: sig = regs.offset; break;
    case kRegClampMin: sig = regs.clamp_min; break;
    case kRegClampMax: sig = regs.clamp_max; break;
    default: break;
  }
  if (req.is_read()) {
    const std::uint32_t v = offset == kRegVersion ? kIspVersion : static_cast<std::uint32_t>(k.read(sig));
    return BusSlave::Access{true, v, codec::ResponseOpcode::kOk};
  }
  if (info->rw_mask == 0) return kErrorResponse;
  const auto old = static_cast<std::uint32_t>(k.read(sig));
  k.write(sig, merge_write(old, req.data, req.be) & info->rw_mask);
  return BusSlave::Access{};
}

ComplexityKnob::ComplexityKnob(hdl::Kernel& k, std::uint32_t gate_factor)
    : gate_factor_(gate_factor), scratch_(1024, 0x9E3779B97F4A7C15ull) {
  if (gate_factor_ == 0) return;
  k.register_process("~complexity", [this](hdl::Kernel& kk) {
    std::uint64_t acc = kk.now();
    for (std::uint32_t i = 0; i < gate_factor_; ++i) {
      auto& s = scratch_[i & 1023u];
      s = s * 6364136223846793005ull + 1442695040888963407ull + acc;
      acc ^= s >> 29;
    }
    checksum_ ^= acc;
  });
}

}  // namespace coemu::dut
