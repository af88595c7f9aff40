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


#pragma once

#include <atomic>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace maskstore {

class OpeServer;
class ServerSession;

/// A reliable, ordered channel of newline-delimited frames. Frames passed to
/// send() and returned by receive() carry no trailing LF.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual void send(std::string_view frame) = 0;
  /// Blocks for the next frame. Throws ProtocolError when the peer is gone.
  virtual std::string receive() = 0;
};

/// In-process transport wired straight to a server session. Frames are
/// validated against the wire grammar exactly as on a socket.
class LoopbackTransport final : public Transport {
 public:
  explicit LoopbackTransport(OpeServer& server);
  ~LoopbackTransport() override;

  void send(std::string_view frame) override;
  std::string receive() override;

 private:
  std::unique_ptr<ServerSession> session_;
  std::deque<std::string> inbox_;
};

/// Records every frame in both directions; the server-blindness checks scan
/// this log.
class CapturingTransport final : public Transport {
 public:
  enum class Direction { ToServer, ToClient };
  struct Entry {
    Direction direction;
    std::string frame;
  };

  explicit CapturingTransport(Transport& inner) : inner_(inner) {}

  void send(std::string_view frame) override;
  std::string receive() override;

  const std::vector<Entry>& log() const { return log_; }

 private:
  Transport& inner_;
  std::vector<Entry> log_;
};

/// Client side of a TCP connection.
class TcpTransport final : public Transport {
 public:
  /// Throws StoreError (I/O) when the connection cannot be established.
  TcpTransport(const std::string& host, std::uint16_t port);
  ~TcpTransport() override;
  TcpTransport(const TcpTransport&) = delete;
  TcpTransport& operator=(const TcpTransport&) = delete;

  void send(std::string_view frame) override;
  std::string receive() override;

 private:
  int fd_ = -1;
  std::string buffer_;
};

/// Parses "host:port". Throws ConfigError.
std::pair<std::string, std::uint16_t> parse_endpoint(std::string_view endpoint);

/// Serves the OPE wire protocol on a TCP port, one thread per connection.
class TcpServer {
 public:
  /// Binds immediately; port 0 picks an ephemeral port. Throws StoreError on
  /// bind failure.
  TcpServer(OpeServer& server, std::uint16_t port, const std::string& bind_address = "127.0.0.1");
  ~TcpServer();
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  std::uint16_t port() const { return port_; }

  /// Accepts connections until stop() is called or `should_stop` returns true.
  void serve(const std::function<bool()>& should_stop = {});
  void stop() { stopping_ = true; }

 private:
  void handle_connection(int fd);

  OpeServer& server_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::mutex workers_mutex_;
  std::vector<std::thread> workers_;
  std::vector<int> open_fds_;
};

}  // namespace maskstore
