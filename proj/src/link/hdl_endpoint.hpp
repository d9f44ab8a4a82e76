#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "hdl/kernel.hpp"
#include "link/message.hpp"

namespace coemu::link {

/// HDL-side task callable from the HVL side through a reactive port.
/// start() latches arguments in zero time; the endpoint then steps the kernel
/// until done() reports completion (checked after every cycle).
class XtfTask {
 public:
  virtual ~XtfTask() = default;
  virtual void start(const PackedBits& args) = 0;
  virtual bool done() const = 0;
  virtual PackedBits take_result() = 0;
};

/// Consumer view of an HVL->HDL streaming port.
class StreamInQueue {
 public:
  bool empty() const noexcept { return q_.empty(); }
  std::size_t size() const noexcept { return q_.size(); }
  const PackedBits& front() const { return q_.front(); }
  PackedBits pop();

 private:
  friend class HdlEndpoint;
  std::deque<PackedBits> q_;
};

class HdlEndpoint;

/// Producer handle for an HDL->HVL streaming port.
class StreamOut {
 public:
  StreamOut() = default;
  void emit(PackedBits payload) const;

 private:
  friend class HdlEndpoint;
  StreamOut(HdlEndpoint* ep, PortDecl port) : ep_(ep), port_(port) {}
  HdlEndpoint* ep_ = nullptr;
  PortDecl port_;
};

/// The HDL context's side of the link: owns no models, only dispatch.
/// Every cycle the kernel executes happens inside handle().
class HdlEndpoint {
 public:
  static constexpr std::uint64_t kMaxTaskCycles = std::uint64_t{1} << 24;

  explicit HdlEndpoint(hdl::Kernel& kernel);

  void bind_task(const PortDecl& port, XtfTask& task);
  StreamInQueue& declare_stream_in(const PortDecl& port);
  StreamOut declare_stream_out(const PortDecl& port);

  /// Port table in declaration order (what the HVL side must mirror).
  const std::vector<PortDecl>& ports() const noexcept { return ports_; }

  /// Processes one inbound message and appends any replies to `out`.
  /// Failures are converted into an error status record and end the session.
  void handle(const Message& m, std::vector<Message>& out);

  bool finished() const noexcept { return finished_; }
  bool failed() const noexcept { return failed_; }
  const std::string& failure() const noexcept { return failure_; }
  hdl::Kernel& kernel() noexcept { return kernel_; }

 private:
  friend class StreamOut;

  void dispatch(const Message& m, std::vector<Message>& out);
  void step(std::uint64_t n);
  void flush(std::vector<Message>& out);
  const PortDecl& port(std::uint16_t id) const;

  hdl::Kernel& kernel_;
  std::vector<PortDecl> ports_;
  std::map<std::uint16_t, XtfTask*> tasks_;
  std::map<std::uint16_t, StreamInQueue> stream_in_;
  std::vector<Message> outbox_;
  bool hello_seen_ = false;
  LinkMode mode_ = LinkMode::kTransactional;
  XtfTask* active_task_ = nullptr;
  std::uint16_t active_port_ = 0;
  bool finished_ = false;
  bool failed_ = false;
  std::string failure_;
};

}  // namespace coemu::link
