#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace coemu::uvm {

enum class Severity : std::uint8_t { kInfo, kWarning, kError, kFatal };

/// Collects messages and counts by severity. fatal() throws FatalError.
class Reporter {
 public:
  void set_echo(std::ostream* out) { echo_ = out; }

  void info(const std::string& id, const std::string& msg);
  void warning(const std::string& id, const std::string& msg);
  void error(const std::string& id, const std::string& msg);
  [[noreturn]] void fatal(const std::string& id, const std::string& msg);

  std::uint64_t count(Severity s) const { return counts_[static_cast<int>(s)]; }
  const std::vector<std::string>& messages() const { return messages_; }

 private:
  void emit(Severity s, const std::string& id, const std::string& msg);

  std::ostream* echo_ = nullptr;
  std::uint64_t counts_[4] = {};
  std::vector<std::string> messages_;
};

}  // namespace coemu::uvm
