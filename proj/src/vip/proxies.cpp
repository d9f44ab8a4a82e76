#include "vip/proxies.hpp"

#include "common/error.hpp"

namespace coemu::vip {

namespace {

BfmHandle lookup_bfm(uvm::Component& c, const char* key, const char* id) {
  BfmHandle h;
  try {
    h = c.registry().get<BfmHandle>(c.full_path(), key);
  } catch (const FatalError& e) {
    c.reporter().fatal(id, c.full_path() + ": " + e.what());
  }
  if (h.link == nullptr) c.reporter().fatal(id, std::string(key) + " is bound to a null link in " + c.full_path());
  return h;
}

}  // namespace

RegDriverProxy::RegDriverProxy(std::string name, uvm::Component& parent) : Component(std::move(name), parent) {}

void RegDriverProxy::build_phase() { bfm_ = lookup_bfm(*this, kDriverBfmKey, "DRIVER_INTERFACE CONFIG ERROR"); }

void RegDriverProxy::connect_phase() {
  if (sequencer_ == nullptr) reporter().fatal("DRIVER", full_path() + " has no sequencer");
  sequencer_->set_driver([this] { drive_one(); });
}

codec::RegPacket RegDriverProxy::from_class_to_struct(const codec::RegPacket& item) {
  codec::RegPacket s = item;
  s.req = 1;
  s.r_req = 0;
  s.r_data = 0;
  s.r_opc = 0;
  return s;
}

void RegDriverProxy::drive(const codec::RegPacket& item) {
  const auto ret = bfm_.link->xtf_call(bfm_.port, codec::pack_reg(from_class_to_struct(item)));
  const auto rsp = codec::unpack_reg(ret);
  sequencer_->item_done(rsp);
  responses.write(rsp);
}

void RegDriverProxy::drive_one() {
  auto req = sequencer_->get_next_item();
  if (!req) throw ProtocolError(full_path() + ": driver pumped with nothing to drive");
  drive(*req);
}

void RegDriverProxy::run_phase() {
  while (auto req = sequencer_->get_next_item()) drive(*req);
}

RegMonitorProxy::RegMonitorProxy(std::string name, uvm::Component& parent) : Component(std::move(name), parent) {}

void RegMonitorProxy::build_phase() { bfm_ = lookup_bfm(*this, kMonitorBfmKey, "MONITOR_INTERFACE CONFIG ERROR"); }

void RegMonitorProxy::connect_phase() {
  bfm_.link->on_sync([this] { poll(); });
}

void RegMonitorProxy::poll() {
  while (auto bits = bfm_.link->stream_recv_ready(bfm_.port)) {
    const auto rec = unpack_monitor_record(*bits);
    if (rec.protocol_error) {
      ++protocol_errors_;
      reporter().error("MONITOR", full_path() + ": bus protocol violation at cycle " + std::to_string(rec.cycle));
      continue;
    }
    ++observed_;
    ap.write(rec);
  }
}

RegAgent::RegAgent(std::string name, uvm::Component& parent) : Component(std::move(name), parent) {
  sequencer_ = &create<RegSequencer>("sequencer");
  driver_ = &create<RegDriverProxy>("driver");
  monitor_ = &create<RegMonitorProxy>("monitor");
  driver_->connect_to(*sequencer_);
}

VideoDriverProxy::VideoDriverProxy(std::string name, uvm::Component& parent) : Component(std::move(name), parent) {}

void VideoDriverProxy::build_phase() { bfm_ = lookup_bfm(*this, kVideoInBfmKey, "VIDEO_INTERFACE CONFIG ERROR"); }

void VideoDriverProxy::send_frame(const codec::FrameTxn& frame) {
  codec::validate_frame(frame);
  bfm_.link->stream_send(bfm_.port, codec::pack_frame_header(frame));
  for (auto& w : codec::pack_frame_pixels(frame)) bfm_.link->stream_send(bfm_.aux_port, std::move(w));
  ++frames_sent_;
}

VideoMonitorProxy::VideoMonitorProxy(std::string name, uvm::Component& parent) : Component(std::move(name), parent) {}

void VideoMonitorProxy::build_phase() { bfm_ = lookup_bfm(*this, kVideoOutBfmKey, "VIDEO_INTERFACE CONFIG ERROR"); }

void VideoMonitorProxy::connect_phase() {
  bfm_.link->on_sync([this] { poll(); });
}

void VideoMonitorProxy::poll() {
  for (;;) {
    if (!header_) {
      header_ = bfm_.link->stream_recv_ready(bfm_.port);
      if (!header_) break;
    }
    const auto hdr = codec::unpack_frame_header(*header_);
    const std::size_t need = codec::pixel_word_count(hdr.width, hdr.height);
    while (words_.size() < need) {
      auto w = bfm_.link->stream_recv_ready(bfm_.aux_port);
      if (!w) break;
      words_.push_back(std::move(*w));
    }
    if (words_.size() < need) break;
    auto frame = codec::unpack_frame(*header_, words_);
    header_.reset();
    words_.clear();
    ap.write(frame);
    ready_.push_back(std::move(frame));
  }
}

std::vector<codec::FrameTxn> VideoMonitorProxy::collect_frames() {
  poll();
  std::vector<codec::FrameTxn> out;
  out.swap(ready_);
  return out;
}

void VideoMonitorProxy::check_drained() {
  poll();
  std::size_t stray = 0;
  while (bfm_.link->stream_recv_ready(bfm_.aux_port)) ++stray;
  if (header_ || !words_.empty() || stray != 0) {
    ++integrity_errors_;
    reporter().error("FRAME_INTEGRITY", full_path() + ": output frame pixel count does not match its header");
    header_.reset();
    words_.clear();
  }
}

IrqMonitorProxy::IrqMonitorProxy(std::string name, uvm::Component& parent) : Component(std::move(name), parent) {}

void IrqMonitorProxy::build_phase() { bfm_ = lookup_bfm(*this, kIrqBfmKey, "IRQ_INTERFACE CONFIG ERROR"); }

void IrqMonitorProxy::connect_phase() {
  bfm_.link->on_sync([this] { poll(); });
}

void IrqMonitorProxy::poll() {
  while (auto bits = bfm_.link->stream_recv_ready(bfm_.port)) cycles_.push_back(bits->get(0, 64));
}

VideoAgent::VideoAgent(std::string name, uvm::Component& parent, bool has_input, bool has_output)
    : Component(std::move(name), parent) {
  if (has_input) driver_ = &create<VideoDriverProxy>("driver");
  if (has_output) monitor_ = &create<VideoMonitorProxy>("monitor");
}

}  // namespace coemu::vip
