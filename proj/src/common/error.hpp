#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace coemu {

// Error categories map one-to-one onto the C API status codes.
enum class ErrorKind : std::uint8_t {
  kConfig = 1,
  kUsage = 2,
  kCodec = 3,
  kFraming = 4,
  kTransport = 5,
  kRemote = 6,
  kProtocol = 7,
  kSimulation = 8,
  kFatal = 9,
  kMap = 10,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define COEMU_DEFINE_ERROR(Name, Kind)                                      \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

COEMU_DEFINE_ERROR(ConfigError, kConfig)
COEMU_DEFINE_ERROR(UsageError, kUsage)
COEMU_DEFINE_ERROR(CodecError, kCodec)
COEMU_DEFINE_ERROR(FramingError, kFraming)
COEMU_DEFINE_ERROR(TransportError, kTransport)
COEMU_DEFINE_ERROR(ProtocolError, kProtocol)
COEMU_DEFINE_ERROR(FatalError, kFatal)
COEMU_DEFINE_ERROR(MapError, kMap)

#undef COEMU_DEFINE_ERROR

/// A fault raised while the HDL side was stepping; carries the cycle it happened on.
class SimulationError : public Error {
 public:
  SimulationError(const std::string& what, std::uint64_t cycle)
      : Error(ErrorKind::kSimulation, what + " (cycle " + std::to_string(cycle) + ")"), cycle_(cycle) {}
  std::uint64_t cycle() const noexcept { return cycle_; }

 private:
  std::uint64_t cycle_;
};

/// An error reported by the far side of the link.
class RemoteError : public Error {
 public:
  RemoteError(const std::string& what, std::uint64_t cycle)
      : Error(ErrorKind::kRemote, "remote: " + what), cycle_(cycle) {}
  std::uint64_t cycle() const noexcept { return cycle_; }

 private:
  std::uint64_t cycle_;
};

}  // namespace coemu
