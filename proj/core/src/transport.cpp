// Copyright 2026 The maskstore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "maskstore/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstring>

#include "maskstore/errors.hpp"
#include "maskstore/ope_server.hpp"

namespace maskstore {
namespace {

constexpr std::size_t kMaxFrame = 1 << 20;

void write_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError(std::string("send failed: ") + std::strerror(errno));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

// Reads one LF-terminated line from `fd`, buffering the remainder. Returns
// false on orderly EOF before any byte of a new line.
bool read_line(int fd, std::string& buffer, std::string& line) {
  while (true) {
    const auto lf = buffer.find('\n');
    if (lf != std::string::npos) {
      line.assign(buffer, 0, lf);
      buffer.erase(0, lf + 1);
      return true;
    }
    if (buffer.size() > kMaxFrame) throw ProtocolError("frame exceeds 1 MiB");
    char chunk[4096];
    const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError(std::string("recv failed: ") + std::strerror(errno));
    }
    if (n == 0) {
      if (!buffer.empty()) throw ProtocolError("connection closed mid-frame");
      return false;
    }
    buffer.append(chunk, static_cast<std::size_t>(n));
  }
}

}  // namespace

// ---------------------------------------------------------------------------

LoopbackTransport::LoopbackTransport(OpeServer& server) : session_(server.open_session()) {}
LoopbackTransport::~LoopbackTransport() = default;

void LoopbackTransport::send(std::string_view frame) {
  // Split exactly as a byte stream would.
  std::size_t start = 0;
  while (start <= frame.size()) {
    const auto lf = frame.find('\n', start);
    const auto line = frame.substr(start, lf == std::string_view::npos ? lf : lf - start);
    if (session_->closed()) return;
    for (auto& response : session_->handle(line)) inbox_.push_back(std::move(response));
    if (lf == std::string_view::npos) break;
    start = lf + 1;
  }
}

std::string LoopbackTransport::receive() {
  if (inbox_.empty()) throw ProtocolError("connection closed by server");
  std::string frame = std::move(inbox_.front());
  inbox_.pop_front();
  return frame;
}

// ---------------------------------------------------------------------------

void CapturingTransport::send(std::string_view frame) {
  log_.push_back({Direction::ToServer, std::string(frame)});
  inner_.send(frame);
}

std::string CapturingTransport::receive() {
  std::string frame = inner_.receive();
  log_.push_back({Direction::ToClient, frame});
  return frame;
}

// ---------------------------------------------------------------------------

std::pair<std::string, std::uint16_t> parse_endpoint(std::string_view endpoint) {
  const auto colon = endpoint.rfind(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == endpoint.size()) {
    throw ConfigError("endpoint must be host:port, got '" + std::string(endpoint) + "'");
  }
  unsigned port = 0;
  const auto digits = endpoint.substr(colon + 1);
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || port == 0 || port > 65535) {
    throw ConfigError("bad port in endpoint '" + std::string(endpoint) + "'");
  }
  return {std::string(endpoint.substr(0, colon)), static_cast<std::uint16_t>(port)};
}

TcpTransport::TcpTransport(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* result = nullptr;
  const std::string service = std::to_string(port);
  if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &result); rc != 0) {
    throw StoreError("cannot resolve " + host + ": " + ::gai_strerror(rc));
  }
  for (addrinfo* ai = result; ai != nullptr; ai = ai->ai_next) {
    fd_ = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd_ < 0) continue;
    if (::connect(fd_, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd_);
    fd_ = -1;
  }
  ::freeaddrinfo(result);
  if (fd_ < 0) throw StoreError("cannot connect to " + host + ":" + service);
  const int one = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

TcpTransport::~TcpTransport() {
  if (fd_ >= 0) ::close(fd_);
}

void TcpTransport::send(std::string_view frame) {
  std::string line(frame);
  line.push_back('\n');
  write_all(fd_, line);
}

std::string TcpTransport::receive() {
  std::string line;
  if (!read_line(fd_, buffer_, line)) throw ProtocolError("connection closed by server");
  return line;
}

// ---------------------------------------------------------------------------

TcpServer::TcpServer(OpeServer& server, std::uint16_t port, const std::string& bind_address)
    : server_(server) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw StoreError(std::string("socket: ") + std::strerror(errno));
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, bind_address.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    throw ConfigError("bad bind address " + bind_address);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 ||
      ::listen(listen_fd_, 64) != 0) {
    const std::string why = std::strerror(errno);
    ::close(listen_fd_);
    throw StoreError("cannot bind " + bind_address + ":" + std::to_string(port) + ": " + why);
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpServer::~TcpServer() {
  stop();
  {
    std::lock_guard lock(workers_mutex_);
    for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
  }
  for (auto& t : workers_) {
    if (t.joinable()) t.join();
  }
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void TcpServer::serve(const std::function<bool()>& should_stop) {
  while (!stopping_ && !(should_stop && should_stop())) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, 100);
    if (rc <= 0) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    std::lock_guard lock(workers_mutex_);
    open_fds_.push_back(fd);
    workers_.emplace_back([this, fd] { handle_connection(fd); });
  }
  std::lock_guard lock(workers_mutex_);
  for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
}

void TcpServer::handle_connection(int fd) {
  auto session = server_.open_session();
  std::string buffer;
  std::string line;
  try {
    while (!session->closed() && read_line(fd, buffer, line)) {
      std::string out;
      for (const auto& frame : session->handle(line)) out.append(frame).push_back('\n');
      if (!out.empty()) write_all(fd, out);
    }
  } catch (const Error&) {
    // Peer vanished or sent an oversized frame; drop the connection.
  }
  std::lock_guard lock(workers_mutex_);
  open_fds_.erase(std::remove(open_fds_.begin(), open_fds_.end(), fd), open_fds_.end());
  ::close(fd);
}

}  // namespace maskstore
