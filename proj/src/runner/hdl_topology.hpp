#pragma once

#include <fstream>
#include <memory>
#include <vector>

#include "dut/models.hpp"
#include "hdl/kernel.hpp"
#include "link/hdl_endpoint.hpp"
#include "runner/config.hpp"
#include "vip/bfm.hpp"

namespace coemu::runner {

/// The HDL half of a test bench: kernel, DUTs, BFMs and the link endpoint
/// with every BFM bound to its port.
class HdlTopology {
 public:
  explicit HdlTopology(const HdlConfig& cfg);
  ~HdlTopology();

  HdlTopology(const HdlTopology&) = delete;
  HdlTopology& operator=(const HdlTopology&) = delete;

  hdl::Kernel& kernel() noexcept { return *kernel_; }
  link::HdlEndpoint& endpoint() noexcept { return *endpoint_; }
  const HdlConfig& config() const noexcept { return cfg_; }

  const hdl::RegBusPins& reg_bus(std::size_t e) const { return reg_buses_.at(e); }
  /// Register-file DUT on interface e, or nullptr when e hosts the ISP.
  dut::RegFileDut* regfile(std::size_t e) { return regfiles_.at(e).get(); }
  dut::IspSubsystemDut* isp() noexcept { return isp_.get(); }
  const hdl::VideoPins* video_in() const noexcept { return video_in_ ? &*video_in_ : nullptr; }
  std::uint64_t video_underruns() const;

 private:
  HdlConfig cfg_;
  std::unique_ptr<hdl::Kernel> kernel_;
  std::unique_ptr<link::HdlEndpoint> endpoint_;
  std::vector<hdl::RegBusPins> reg_buses_;
  std::vector<std::unique_ptr<vip::RegDriverBfm>> drivers_;
  std::vector<std::unique_ptr<vip::RegMonitorBfm>> monitors_;
  std::vector<std::unique_ptr<dut::RegFileDut>> regfiles_;
  std::unique_ptr<dut::IspSubsystemDut> isp_;
  std::optional<hdl::VideoPins> video_in_;
  std::unique_ptr<vip::VideoInBfm> video_in_bfm_;
  std::unique_ptr<vip::VideoOutMonitorBfm> video_out_bfm_;
  std::vector<std::unique_ptr<vip::IrqMonitorBfm>> irq_bfms_;
  std::unique_ptr<dut::ComplexityKnob> knob_;
  std::ofstream trace_;
};

}  // namespace coemu::runner
