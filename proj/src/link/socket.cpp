#include "link/socket.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <thread>

#include "common/error.hpp"
#include "link/hdl_endpoint.hpp"

namespace coemu::link {

namespace {

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

sockaddr_in resolve(const HostPort& where) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(where.port);
  const std::string host = where.host.empty() || where.host == "localhost" ? "127.0.0.1" : where.host;
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    addrinfo* res = nullptr;
    if (getaddrinfo(host.c_str(), nullptr, &hints, &res) != 0 || res == nullptr) {
      throw TransportError("cannot resolve host '" + host + "'");
    }
    addr.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
    freeaddrinfo(res);
  }
  return addr;
}

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

}  // namespace

HostPort parse_endpoint(const std::string& endpoint) {
  const auto colon = endpoint.rfind(':');
  if (colon == std::string::npos || colon + 1 == endpoint.size()) {
    throw ConfigError("endpoint must be host:port, got '" + endpoint + "'");
  }
  HostPort hp;
  hp.host = endpoint.substr(0, colon);
  unsigned long port = 0;
  try {
    std::size_t used = 0;
    port = std::stoul(endpoint.substr(colon + 1), &used);
    if (used != endpoint.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ConfigError("invalid port in endpoint '" + endpoint + "'");
  }
  if (port > 65535) throw ConfigError("port out of range in endpoint '" + endpoint + "'");
  hp.port = static_cast<std::uint16_t>(port);
  return hp;
}

Fd::~Fd() { reset(); }

Fd& Fd::operator=(Fd&& other) noexcept {
  if (this != &other) {
    reset();
    fd_ = other.release();
  }
  return *this;
}

void Fd::reset() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

Fd listen_tcp(const HostPort& where) {
  Fd fd(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
  if (!fd) throw TransportError(errno_text("socket"));
  int one = 1;
  ::setsockopt(fd.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  const sockaddr_in addr = resolve(where);
  if (::bind(fd.get(), reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0) {
    throw TransportError(errno_text("bind"));
  }
  if (::listen(fd.get(), 4) != 0) throw TransportError(errno_text("listen"));
  return fd;
}

std::uint16_t bound_port(const Fd& listener) {
  sockaddr_in addr{};
  socklen_t len = sizeof addr;
  if (::getsockname(listener.get(), reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
    throw TransportError(errno_text("getsockname"));
  }
  return ntohs(addr.sin_port);
}

Fd accept_one(const Fd& listener) {
  for (;;) {
    int c = ::accept4(listener.get(), nullptr, nullptr, SOCK_CLOEXEC);
    if (c >= 0) {
      set_nodelay(c);
      return Fd(c);
    }
    if (errno != EINTR) throw TransportError(errno_text("accept"));
  }
}

Fd connect_tcp(const HostPort& where, int attempts) {
  const sockaddr_in addr = resolve(where);
  for (int i = 0; i < attempts; ++i) {
    Fd fd(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
    if (!fd) throw TransportError(errno_text("socket"));
    if (::connect(fd.get(), reinterpret_cast<const sockaddr*>(&addr), sizeof addr) == 0) {
      set_nodelay(fd.get());
      return fd;
    }
    if (errno != ECONNREFUSED && errno != EINTR) throw TransportError(errno_text("connect"));
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  throw TransportError("connect to " + where.host + ":" + std::to_string(where.port) + " refused");
}

bool FrameReader::has_buffered_frame() const {
  const std::span<const std::uint8_t> avail(buf_.data() + pos_, buf_.size() - pos_);
  const auto size = frame_size(avail);
  return size && avail.size() >= *size;
}

bool FrameReader::fill() {
  if (pos_ > 0 && pos_ == buf_.size()) {
    buf_.clear();
    pos_ = 0;
  } else if (pos_ > 65536) {
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(pos_));
    pos_ = 0;
  }
  std::uint8_t chunk[65536];
  for (;;) {
    const ssize_t n = ::read(fd_, chunk, sizeof chunk);
    if (n > 0) {
      buf_.insert(buf_.end(), chunk, chunk + n);
      return true;
    }
    if (n == 0) return false;
    if (errno != EINTR) throw TransportError(errno_text("read"));
  }
}

bool FrameReader::next(Message& out) {
  for (;;) {
    const std::span<const std::uint8_t> avail(buf_.data() + pos_, buf_.size() - pos_);
    const auto size = frame_size(avail);
    if (size && avail.size() >= *size) {
      out = decode_frame(avail.first(*size));
      pos_ += *size;
      return true;
    }
    if (!fill()) {
      if (pos_ == buf_.size()) return false;
      throw TransportError("connection closed mid-frame");
    }
  }
}

void write_all(int fd, const std::vector<std::uint8_t>& bytes) {
  std::size_t off = 0;
  while (off < bytes.size()) {
    const ssize_t n = ::send(fd, bytes.data() + off, bytes.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(errno_text("write"));
    }
    off += static_cast<std::size_t>(n);
  }
}

SocketTransport::SocketTransport(Fd fd) : fd_(std::move(fd)), reader_(fd_.get()) {}

std::unique_ptr<SocketTransport> SocketTransport::connect(const std::string& endpoint) {
  return std::make_unique<SocketTransport>(connect_tcp(parse_endpoint(endpoint)));
}

void SocketTransport::send(std::span<const Message> batch) {
  if (!fd_) throw TransportError("transport closed");
  scratch_.clear();
  for (const auto& m : batch) append_frame(scratch_, m);
  write_all(fd_.get(), scratch_);
}

Message SocketTransport::receive() {
  if (!fd_) throw TransportError("transport closed");
  Message m;
  if (!reader_.next(m)) throw TransportError("HDL side closed the connection");
  return m;
}

void SocketTransport::close() { fd_.reset(); }

void serve_connection(int fd, HdlEndpoint& endpoint) {
  FrameReader reader(fd);
  std::vector<Message> replies;
  std::vector<std::uint8_t> out;
  Message m;
  while (!endpoint.finished()) {
    try {
      if (!reader.next(m)) break;
    } catch (const FramingError& e) {
      out.clear();
      append_frame(out, Message{MsgType::kStreamOut, kControlPort,
                                make_status(StatusKind::kError, endpoint.kernel().now(), e.what())});
      write_all(fd, out);
      return;
    }
    endpoint.handle(m, replies);
    if (!reader.has_buffered_frame() || endpoint.finished()) {
      if (!replies.empty()) {
        out.clear();
        for (const auto& r : replies) append_frame(out, r);
        replies.clear();
        write_all(fd, out);
      }
    }
  }
}

}  // namespace coemu::link
