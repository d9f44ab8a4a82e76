#include "uvm/registry.hpp"

namespace coemu::uvm {

void BindingRegistry::set(const std::string& path, const std::string& key, std::any endpoint) {
  if (path.empty()) throw ConfigError("binding path must be non-empty");
  if (key.empty()) throw ConfigError("binding key must be non-empty");
  if (closed_) throw ConfigError("binding " + path + "/" + key + " set after BUILD completed");
  auto [it, inserted] = entries_.insert_or_assign({path, key}, std::move(endpoint));
  if (!inserted && warn_) warn_("binding " + path + "/" + key + " overwritten; last write wins");
}

bool BindingRegistry::contains(const std::string& path, const std::string& key) const {
  return entries_.contains({path, key});
}

const std::any& BindingRegistry::lookup(const std::string& path, const std::string& key) const {
  if (path.empty()) throw ConfigError("binding path must be non-empty");
  auto it = entries_.find({path, key});
  if (it == entries_.end()) throw FatalError(key + " is not set for " + path);
  return it->second;
}

}  // namespace coemu::uvm
