#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "link/transport.hpp"

namespace coemu::link {

class HdlEndpoint;

struct HostPort {
  std::string host;
  std::uint16_t port = 0;
};

/// Parses `host:port`; port 0 is allowed (ephemeral, listen only).
HostPort parse_endpoint(const std::string& endpoint);

/// Owning file descriptor.
class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  ~Fd();
  Fd(Fd&& other) noexcept : fd_(other.release()) {}
  Fd& operator=(Fd&& other) noexcept;
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;

  int get() const noexcept { return fd_; }
  int release() noexcept {
    int f = fd_;
    fd_ = -1;
    return f;
  }
  void reset();
  explicit operator bool() const noexcept { return fd_ >= 0; }

 private:
  int fd_ = -1;
};

Fd listen_tcp(const HostPort& where);
/// Port actually bound by a listening socket.
std::uint16_t bound_port(const Fd& listener);
Fd accept_one(const Fd& listener);
/// Connects with a bounded number of retries (the server may still be starting).
Fd connect_tcp(const HostPort& where, int attempts = 50);

/// Reads whole frames from a stream socket.
class FrameReader {
 public:
  explicit FrameReader(int fd) : fd_(fd) {}
  /// Blocks for the next frame; returns false on clean EOF at a frame boundary.
  bool next(Message& out);
  /// True when a complete frame is already buffered (no syscall needed).
  bool has_buffered_frame() const;

 private:
  bool fill();
  int fd_;
  std::vector<std::uint8_t> buf_;
  std::size_t pos_ = 0;
};

void write_all(int fd, const std::vector<std::uint8_t>& bytes);

/// HVL-side TCP transport.
class SocketTransport final : public Transport {
 public:
  explicit SocketTransport(Fd fd);
  static std::unique_ptr<SocketTransport> connect(const std::string& endpoint);

  void send(std::span<const Message> batch) override;
  Message receive() override;
  void close() override;

 private:
  Fd fd_;
  FrameReader reader_;
  std::vector<std::uint8_t> scratch_;
};

/// Serves one HVL connection until SHUTDOWN, error, or EOF. Replies are
/// written when no further complete request is buffered.
void serve_connection(int fd, HdlEndpoint& endpoint);

}  // namespace coemu::link
