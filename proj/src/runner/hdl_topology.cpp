#include "runner/hdl_topology.hpp"

#include "common/error.hpp"
#include "runner/ports.hpp"

namespace coemu::runner {

namespace {

const link::PortDecl& find_port(const std::vector<link::PortDecl>& ports, std::uint16_t id) {
  for (const auto& p : ports) {
    if (p.port_id == id) return p;
  }
  throw ConfigError("topology has no port " + std::to_string(id));
}

}  // namespace

HdlTopology::HdlTopology(const HdlConfig& cfg) : cfg_(cfg) {
  cfg_.env.validate(cfg_.dut);
  const auto ports = topology_ports(cfg_);
  hdl::ResetGen reset;
  reset.assert_cycles = cfg_.reset_cycles;
  kernel_ = std::make_unique<hdl::Kernel>(reset);
  endpoint_ = std::make_unique<link::HdlEndpoint>(*kernel_);
  auto& k = *kernel_;
  auto& ep = *endpoint_;

  const auto& env = cfg_.env;
  if (cfg_.dut == DutKind::kIsp) video_in_ = hdl::make_video_bus(k, "vin0");

  for (std::uint32_t e = 0; e < env.E; ++e) {
    const std::string key = "reg" + std::to_string(e);
    reg_buses_.push_back(hdl::make_reg_bus(k, key));
    const auto& pins = reg_buses_.back();
    drivers_.push_back(std::make_unique<vip::RegDriverBfm>(
        k, pins, key, vip::RegDriverBfm::Options{cfg_.timeout, true}));
    ep.bind_task(find_port(ports, reg_driver_port(e)), *drivers_.back());
    monitors_.push_back(std::make_unique<vip::RegMonitorBfm>(
        k, pins, key, ep.declare_stream_out(find_port(ports, reg_monitor_port(e))), cfg_.timeout));
    if (cfg_.dut == DutKind::kIsp && e == 0) {
      dut::IspSubsystemDut::Params p;
      p.chain_length = env.R;
      p.base = cfg_.reg_base;
      p.response_latency = cfg_.response_latency;
      p.pipeline_latency = cfg_.pipeline_latency;
      p.reset_values = cfg_.isp_reset;
      isp_ = std::make_unique<dut::IspSubsystemDut>(k, "isp", pins, *video_in_, p);
      regfiles_.push_back(nullptr);
    } else {
      regfiles_.push_back(
          std::make_unique<dut::RegFileDut>(k, pins, "rf" + std::to_string(e), cfg_.reg_base, cfg_.response_latency));
    }
  }

  if (isp_) {
    auto& hdr = ep.declare_stream_in(find_port(ports, video_in_header_port(0)));
    auto& words = ep.declare_stream_in(find_port(ports, video_in_pixel_port(0)));
    video_in_bfm_ = std::make_unique<vip::VideoInBfm>(k, *video_in_, "vin0", hdr, words);
    video_out_bfm_ = std::make_unique<vip::VideoOutMonitorBfm>(
        k, isp_->video_out(), "vout0", ep.declare_stream_out(find_port(ports, video_out_header_port(0))),
        ep.declare_stream_out(find_port(ports, video_out_pixel_port(0))));
    for (std::uint32_t d = 0; d < env.D; ++d) {
      irq_bfms_.push_back(std::make_unique<vip::IrqMonitorBfm>(
          k, isp_->ip(d).irq(), "irq" + std::to_string(d), ep.declare_stream_out(find_port(ports, irq_port(d)))));
    }
  }

  knob_ = std::make_unique<dut::ComplexityKnob>(k, cfg_.gate_factor);

  if (ep.ports().size() != ports.size()) throw ConfigError("HDL topology left ports unbound");
  if (!cfg_.trace_path.empty()) {
    trace_.open(cfg_.trace_path);
    if (!trace_) throw ConfigError("cannot write trace file " + cfg_.trace_path.string());
    k.set_trace(&trace_);
  }
}

HdlTopology::~HdlTopology() {
  if (kernel_) kernel_->set_trace(nullptr);
}

std::uint64_t HdlTopology::video_underruns() const { return video_in_bfm_ ? video_in_bfm_->underruns() : 0; }

}  // namespace coemu::runner
