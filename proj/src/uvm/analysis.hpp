#pragma once

#include <functional>
#include <vector>

namespace coemu::uvm {

/// One-to-many broadcast; subscribers are called in subscription order.
template <class T>
class AnalysisPort {
 public:
  using Sink = std::function<void(const T&)>;

  void subscribe(Sink sink) { sinks_.push_back(std::move(sink)); }
  void write(const T& item) const {
    for (const auto& s : sinks_) s(item);
  }
  std::size_t subscriber_count() const noexcept { return sinks_.size(); }

 private:
  std::vector<Sink> sinks_;
};

}  // namespace coemu::uvm
