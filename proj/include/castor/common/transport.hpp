// Copyright 2026 The castor-mini Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <cstdint>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "castor/common/net.hpp"

namespace castor {

// Server side of a framed channel. One call per received frame; the returned
// string is sent back as one frame. Must be thread-safe: the TCP server runs one
// thread per connection.
class FrameHandler {
 public:
  virtual ~FrameHandler() = default;
  virtual std::string handle_frame(std::string_view body, uint64_t connection_id) = 0;
  virtual void on_disconnect(uint64_t /*connection_id*/) {}
};

uint64_t next_connection_id();

// Client side: send one frame, receive one frame.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string roundtrip(std::string_view body) = 0;
  virtual const std::string& address() const = 0;
};

// In-process channel. Frames still go through encode/decode so the byte format
// is exercised exactly as on a socket.
class LoopbackTransport final : public Transport {
 public:
  LoopbackTransport(std::string address, FrameHandler& handler);
  ~LoopbackTransport() override;

  std::string roundtrip(std::string_view body) override;
  const std::string& address() const override { return address_; }

 private:
  std::string address_;
  FrameHandler& handler_;
  uint64_t connection_id_;
};

// Keeps a small pool of connections so concurrent callers do not serialize on
// one socket. A failed exchange drops the connection and throws
// kEnvironmentDown; the next call reconnects.
class TcpTransport final : public Transport {
 public:
  explicit TcpTransport(std::string address);
  ~TcpTransport() override;

  std::string roundtrip(std::string_view body) override;
  const std::string& address() const override { return address_; }

 private:
  std::string address_;
  net::HostPort peer_;
  std::mutex mu_;
  std::vector<int> idle_;
};

// Resolves addresses to transports: "loop://name" to a registered in-process
// handler, anything else to TCP host:port.
class Connector {
 public:
  void register_loopback(const std::string& name, FrameHandler* handler);
  std::shared_ptr<Transport> connect(const std::string& address) const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, FrameHandler*> loopbacks_;
};

class FrameServer {
 public:
  FrameServer(FrameHandler& handler, net::HostPort listen_addr);
  ~FrameServer();
  FrameServer(const FrameServer&) = delete;
  FrameServer& operator=(const FrameServer&) = delete;

  void start();
  void stop();
  uint16_t port() const { return port_; }

 private:
  struct Conn {
    int fd;
    std::thread thread;
    std::atomic<bool> done{false};
  };

  void accept_loop();
  void serve(Conn* conn);
  void reap_finished();

  FrameHandler& handler_;
  net::HostPort listen_addr_;
  int listen_fd_ = -1;
  uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;
  std::mutex conns_mu_;
  std::list<Conn> conns_;
};

}  // namespace castor
