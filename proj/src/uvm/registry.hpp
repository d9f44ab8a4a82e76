#pragma once

#include <any>
#include <functional>
#include <map>
#include <string>
#include <utility>

#include "common/error.hpp"

namespace coemu::uvm {

/// Exact-match (context path, key) -> endpoint handle store, the
/// config-db used to hand BFM endpoints to proxies before BUILD completes.
class BindingRegistry {
 public:
  using WarningSink = std::function<void(const std::string&)>;

  void set_warning_sink(WarningSink sink) { warn_ = std::move(sink); }

  void set(const std::string& path, const std::string& key, std::any endpoint);

  /// Missing binding is fatal: elaboration cannot continue without it.
  template <class T>
  T get(const std::string& path, const std::string& key) const {
    const std::any& a = lookup(path, key);
    if (const T* v = std::any_cast<T>(&a)) return *v;
    throw FatalError(key + " bound at " + path + " has the wrong handle type");
  }

  bool contains(const std::string& path, const std::string& key) const;
  std::size_t size() const noexcept { return entries_.size(); }

  /// Called when BUILD completes; later sets are configuration errors.
  void close() noexcept { closed_ = true; }
  bool closed() const noexcept { return closed_; }

 private:
  const std::any& lookup(const std::string& path, const std::string& key) const;

  std::map<std::pair<std::string, std::string>, std::any> entries_;
  WarningSink warn_;
  bool closed_ = false;
};

}  // namespace coemu::uvm
