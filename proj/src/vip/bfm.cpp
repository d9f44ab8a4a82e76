#include "vip/bfm.hpp"

#include "common/error.hpp"

namespace coemu::vip {

RegDriverBfm::RegDriverBfm(hdl::Kernel& k, const hdl::RegBusPins& pins, const std::string& key, Options options)
    : pins_(pins), options_(options) {
  if (options_.timeout < 1) throw ConfigError("driver timeout must be >= 1 cycle");
  k.register_process(key + ".drv", [this](hdl::Kernel& kk) { eval(kk); });
  k.register_observer(key + ".drv", [this](const hdl::Kernel& kk) { sample(kk); });
}

void RegDriverBfm::start(const codec::PackedBits& args) {
  if (state_ != State::kIdle) throw ProtocolError("drive task started while busy");
  current_ = codec::unpack_reg(args);
  current_.req = 1;
  current_.r_req = 0;
  current_.r_data = 0;
  current_.r_opc = 0;
  state_ = State::kArmed;
}

void RegDriverBfm::eval(hdl::Kernel& k) {
  if (state_ == State::kArmed && !(options_.wait_for_reset && k.in_reset())) {
    k.write(pins_.req, 1);
    k.write(pins_.eop, current_.eop);
    k.write(pins_.addr, current_.addr);
    k.write(pins_.data, current_.data);
    k.write(pins_.be, current_.be);
    driving_ = true;
    req_cycle_ = k.now() + 1;
    state_ = State::kWaiting;
  } else if (driving_) {
    k.write(pins_.req, 0);
    k.write(pins_.eop, 0);
    k.write(pins_.addr, 0);
    k.write(pins_.data, 0);
    k.write(pins_.be, 0);
    driving_ = false;
  }
}

void RegDriverBfm::sample(const hdl::Kernel& k) {
  if (state_ != State::kWaiting || k.now() <= req_cycle_) return;
  if (k.read(pins_.r_req) == 1) {
    current_.r_req = 1;
    current_.r_data = static_cast<std::uint32_t>(k.read(pins_.r_data));
    current_.r_opc = static_cast<std::uint8_t>(k.read(pins_.r_opc));
    state_ = State::kDone;
  } else if (k.now() - req_cycle_ >= options_.timeout) {
    current_.r_req = 0;
    current_.r_data = 0;
    current_.r_opc = static_cast<std::uint8_t>(codec::ResponseOpcode::kError);
    state_ = State::kDone;
  }
}

codec::PackedBits RegDriverBfm::take_result() {
  if (state_ != State::kDone) throw ProtocolError("drive task result taken before completion");
  state_ = State::kIdle;
  ++transactions_;
  return codec::pack_reg(current_);
}

RegMonitorBfm::RegMonitorBfm(hdl::Kernel& k, const hdl::RegBusPins& pins, const std::string& key,
                             link::StreamOut out, std::uint32_t timeout)
    : pins_(pins), out_(std::move(out)), timeout_(timeout) {
  k.register_observer(key + ".mon", [this](const hdl::Kernel& kk) { sample(kk); });
}

void RegMonitorBfm::sample(const hdl::Kernel& k) {
  const hdl::SimTime now = k.now();
  const bool r_req = k.read(pins_.r_req) == 1;
  if (pending_) {
    if (r_req) {
      pending_->r_req = 1;
      pending_->r_data = static_cast<std::uint32_t>(k.read(pins_.r_data));
      pending_->r_opc = static_cast<std::uint8_t>(k.read(pins_.r_opc));
      out_.emit(pack_monitor_record({false, now, *pending_}));
      pending_.reset();
    } else if (now - req_cycle_ >= timeout_) {
      pending_->r_opc = static_cast<std::uint8_t>(codec::ResponseOpcode::kError);
      out_.emit(pack_monitor_record({false, now, *pending_}));
      pending_.reset();
    }
  } else if (r_req) {
    codec::RegPacket orphan;
    orphan.r_req = 1;
    orphan.r_data = static_cast<std::uint32_t>(k.read(pins_.r_data));
    orphan.r_opc = static_cast<std::uint8_t>(k.read(pins_.r_opc));
    out_.emit(pack_monitor_record({true, now, orphan}));
  }
  if (k.read(pins_.req) == 1) {
    if (pending_) out_.emit(pack_monitor_record({true, now, *pending_}));
    codec::RegPacket p;
    p.req = 1;
    p.eop = static_cast<std::uint8_t>(k.read(pins_.eop));
    p.addr = static_cast<std::uint32_t>(k.read(pins_.addr));
    p.data = static_cast<std::uint32_t>(k.read(pins_.data));
    p.be = static_cast<std::uint8_t>(k.read(pins_.be));
    pending_ = p;
    req_cycle_ = now;
  }
}

VideoInBfm::VideoInBfm(hdl::Kernel& k, const hdl::VideoPins& pins, const std::string& key,
                       link::StreamInQueue& headers, link::StreamInQueue& words)
    : pins_(pins), headers_(headers), words_(words) {
  k.register_process(key + ".vin", [this](hdl::Kernel& kk) { eval(kk); });
}

void VideoInBfm::idle(hdl::Kernel& k) {
  if (!driving_) return;
  k.write(pins_.pixel_valid, 0);
  k.write(pins_.frame_start, 0);
  k.write(pins_.line_start, 0);
  k.write(pins_.pixel_data, 0);
  driving_ = false;
}

void VideoInBfm::eval(hdl::Kernel& k) {
  if (k.in_reset()) return idle(k);
  if (!active_) {
    if (blank_ || headers_.empty()) {
      blank_ = false;
      return idle(k);
    }
    const auto hdr = codec::unpack_frame_header(headers_.pop());
    width_ = hdr.width;
    total_ = std::uint32_t{hdr.width} * hdr.height;
    index_ = 0;
    active_ = true;
  }
  std::uint16_t px = held_;
  if (index_ % 2 == 0) {
    if (words_.empty()) {
      ++underruns_;
      return idle(k);
    }
    const auto w = words_.pop();
    px = static_cast<std::uint16_t>(w.get(16, 16));
    held_ = static_cast<std::uint16_t>(w.get(0, 16));
  }
  k.write(pins_.pixel_valid, 1);
  k.write(pins_.frame_start, index_ == 0 ? 1 : 0);
  k.write(pins_.line_start, index_ % width_ == 0 ? 1 : 0);
  k.write(pins_.pixel_data, px);
  driving_ = true;
  if (++index_ == total_) {
    active_ = false;
    blank_ = true;
  }
}

VideoOutMonitorBfm::VideoOutMonitorBfm(hdl::Kernel& k, const hdl::VideoPins& pins, const std::string& key,
                                       link::StreamOut headers, link::StreamOut words)
    : pins_(pins), headers_(std::move(headers)), words_(std::move(words)) {
  k.register_observer(key + ".vout", [this](const hdl::Kernel& kk) { sample(kk); });
}

void VideoOutMonitorBfm::sample(const hdl::Kernel& k) {
  if (k.read(pins_.pixel_valid) == 0) {
    if (collecting_) finish();
    return;
  }
  if (k.read(pins_.frame_start) == 1) {
    if (collecting_) finish();
    collecting_ = true;
  }
  if (!collecting_) {
    collecting_ = true;  // pixel without frame_start; keep it, integrity is judged upstream
  }
  if (k.read(pins_.line_start) == 1) ++lines_;
  if (lines_ <= 1) ++first_line_;
  pixels_.push_back(static_cast<std::uint16_t>(k.read(pins_.pixel_data)));
}

void VideoOutMonitorBfm::finish() {
  codec::FrameTxn f;
  f.frame_id = next_id_++;
  f.width = static_cast<std::uint16_t>(first_line_ == 0 ? pixels_.size() : first_line_);
  f.height = static_cast<std::uint16_t>(lines_ == 0 ? 1 : lines_);
  headers_.emit(codec::pack_frame_header(f));
  for (std::size_t i = 0; i < pixels_.size(); i += 2) {
    words_.emit(codec::pack_pixel_word(pixels_[i], i + 1 < pixels_.size() ? pixels_[i + 1] : 0));
  }
  pixels_.clear();
  first_line_ = 0;
  lines_ = 0;
  collecting_ = false;
}

IrqMonitorBfm::IrqMonitorBfm(hdl::Kernel& k, hdl::SignalId irq, const std::string& key, link::StreamOut out)
    : irq_(irq), out_(std::move(out)) {
  k.register_observer(key + ".irq", [this](const hdl::Kernel& kk) {
    if (kk.read(irq_) == 1) out_.emit(codec::PackedBits::from_u64(kIrqRecordWidth, kk.now()));
  });
}

}  // namespace coemu::vip
