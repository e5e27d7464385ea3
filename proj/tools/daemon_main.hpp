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

#include <csignal>
#include <spdlog/spdlog.h>

#include "castor/common/net.hpp"
#include "castor/common/transport.hpp"
#include "castor/site/deployment.hpp"
#include "tool_main.hpp"

namespace castor::tools {

// Blocks SIGINT and SIGTERM in this thread and every thread started later.
inline sigset_t block_signals() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  return set;
}

// Serves `handler` on `listen` until SIGINT or SIGTERM.
inline void serve(const std::string& name, FrameHandler& handler, const std::string& listen, const sigset_t& signals) {
  FrameServer server(handler, net::parse_host_port(listen));
  server.start();
  spdlog::info("{} listening on {}", name, listen);
  int sig = 0;
  sigwait(&signals, &sig);
  spdlog::info("{} stopping on signal {}", name, sig);
  server.stop();
}

struct DaemonArgs {
  std::string config;
  std::string server;
};

inline void add_daemon_options(CLI::App& app, DaemonArgs& args) {
  app.add_option("-c,--config", args.config, "deployment config (default: $CASTOR_CONFIG)");
}

}  // namespace castor::tools
