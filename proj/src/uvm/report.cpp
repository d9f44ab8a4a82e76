#include "uvm/report.hpp"

#include "common/error.hpp"

namespace coemu::uvm {

namespace {
const char* tag(Severity s) {
  switch (s) {
    case Severity::kInfo: return "INFO";
    case Severity::kWarning: return "WARNING";
    case Severity::kError: return "ERROR";
    case Severity::kFatal: return "FATAL";
  }
  return "?";
}
}  // namespace

void Reporter::emit(Severity s, const std::string& id, const std::string& msg) {
  ++counts_[static_cast<int>(s)];
  std::string line = std::string(tag(s)) + " [" + id + "] " + msg;
  if (echo_ != nullptr) *echo_ << line << '\n';
  messages_.push_back(std::move(line));
}

void Reporter::info(const std::string& id, const std::string& msg) { emit(Severity::kInfo, id, msg); }
void Reporter::warning(const std::string& id, const std::string& msg) { emit(Severity::kWarning, id, msg); }
void Reporter::error(const std::string& id, const std::string& msg) { emit(Severity::kError, id, msg); }

void Reporter::fatal(const std::string& id, const std::string& msg) {
  emit(Severity::kFatal, id, msg);
  throw FatalError(id + ": " + msg);
}

}  // namespace coemu::uvm
