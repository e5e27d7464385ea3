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

#include "castor/common/transport.hpp"

#include <sys/socket.h>
#include <unistd.h>

#include "castor/common/error.hpp"
#include "castor/common/frame.hpp"

namespace castor {

uint64_t next_connection_id() {
  static std::atomic<uint64_t> counter{1};
  return counter.fetch_add(1);
}

LoopbackTransport::LoopbackTransport(std::string address, FrameHandler& handler)
    : address_(std::move(address)), handler_(handler), connection_id_(next_connection_id()) {}

LoopbackTransport::~LoopbackTransport() { handler_.on_disconnect(connection_id_); }

std::string LoopbackTransport::roundtrip(std::string_view body) {
  wire::FrameDecoder inbound;
  inbound.feed(wire::encode_frame(body));
  auto request = inbound.next();
  if (!request) raise(Errc::kProtocolError, "loopback request did not decode");
  const std::string reply = handler_.handle_frame(*request, connection_id_);
  wire::FrameDecoder outbound;
  outbound.feed(wire::encode_frame(reply));
  auto response = outbound.next();
  if (!response) raise(Errc::kProtocolError, "loopback reply did not decode");
  return std::move(*response);
}

TcpTransport::TcpTransport(std::string address)
    : address_(std::move(address)), peer_(net::parse_host_port(address_)) {}

TcpTransport::~TcpTransport() {
  for (int fd : idle_) ::close(fd);
}

std::string TcpTransport::roundtrip(std::string_view body) {
  int fd = -1;
  {
    std::lock_guard lock(mu_);
    if (!idle_.empty()) {
      fd = idle_.back();
      idle_.pop_back();
    }
  }
  std::string reply;
  if (fd >= 0) {
    // A pooled connection may belong to a peer that restarted since; such a
    // failure is retried once on a fresh connection.
    net::UniqueFd guard(fd);
    bool ok = false;
    try {
      wire::write_frame(fd, body);
      ok = wire::read_frame(fd, reply);
    } catch (const CastorError&) {
    }
    if (ok) {
      std::lock_guard lock(mu_);
      idle_.push_back(guard.release());
      return reply;
    }
  }
  net::UniqueFd guard(net::connect_tcp(peer_));
  wire::write_frame(guard.get(), body);
  if (!wire::read_frame(guard.get(), reply)) raise(Errc::kEnvironmentDown, address_ + " closed the connection");
  std::lock_guard lock(mu_);
  idle_.push_back(guard.release());
  return reply;
}

void Connector::register_loopback(const std::string& name, FrameHandler* handler) {
  std::lock_guard lock(mu_);
  loopbacks_[name] = handler;
}

std::shared_ptr<Transport> Connector::connect(const std::string& address) const {
  constexpr std::string_view kLoop = "loop://";
  if (address.compare(0, kLoop.size(), kLoop) == 0) {
    std::lock_guard lock(mu_);
    auto it = loopbacks_.find(address.substr(kLoop.size()));
    if (it == loopbacks_.end()) raise(Errc::kEnvironmentDown, "no loopback endpoint " + address);
    return std::make_shared<LoopbackTransport>(address, *it->second);
  }
  return std::make_shared<TcpTransport>(address);
}

FrameServer::FrameServer(FrameHandler& handler, net::HostPort listen_addr)
    : handler_(handler), listen_addr_(std::move(listen_addr)) {}

FrameServer::~FrameServer() { stop(); }

void FrameServer::start() {
  listen_fd_ = net::listen_tcp(listen_addr_, &port_);
  acceptor_ = std::thread([this] { accept_loop(); });
}

void FrameServer::stop() {
  if (stopping_.exchange(true)) return;
  if (listen_fd_ >= 0) ::shutdown(listen_fd_, SHUT_RDWR);
  if (acceptor_.joinable()) acceptor_.join();
  if (listen_fd_ >= 0) ::close(listen_fd_);
  listen_fd_ = -1;
  std::lock_guard lock(conns_mu_);
  for (auto& c : conns_) ::shutdown(c.fd, SHUT_RDWR);
  for (auto& c : conns_) {
    if (c.thread.joinable()) c.thread.join();
    ::close(c.fd);
  }
  conns_.clear();
}

void FrameServer::reap_finished() {
  std::lock_guard lock(conns_mu_);
  for (auto it = conns_.begin(); it != conns_.end();) {
    if (it->done.load()) {
      it->thread.join();
      ::close(it->fd);
      it = conns_.erase(it);
    } else {
      ++it;
    }
  }
}

void FrameServer::accept_loop() {
  while (!stopping_.load()) {
    const int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) {
      if (stopping_.load()) return;
      if (errno == EINTR || errno == ECONNABORTED) continue;
      return;
    }
    reap_finished();
    std::lock_guard lock(conns_mu_);
    if (stopping_.load()) {
      ::close(fd);
      return;
    }
    Conn& conn = conns_.emplace_back();
    conn.fd = fd;
    conn.thread = std::thread([this, c = &conn] { serve(c); });
  }
}

void FrameServer::serve(Conn* conn) {
  const uint64_t id = next_connection_id();
  try {
    std::string body;
    while (wire::read_frame(conn->fd, body)) {
      wire::write_frame(conn->fd, handler_.handle_frame(body, id));
    }
  } catch (const std::exception&) {
    // peer went away or sent garbage; the connection is dropped either way
  }
  handler_.on_disconnect(id);
  conn->done.store(true);
}

}  // namespace castor
