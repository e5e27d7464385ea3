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

#include <memory>

#include "castor/common/transport.hpp"
#include "castor/site/deployment.hpp"
#include "tool_main.hpp"

namespace castor::tools {

// A client tool's view of the deployment named by --config or $CASTOR_CONFIG.
struct ClientEnv {
  std::string config;
  std::string pool;
  site::Deployment deployment;
  std::shared_ptr<Connector> connector;

  void add_options(CLI::App& app, bool with_pool = false) {
    app.add_option("-c,--config", config, "deployment config (default: $CASTOR_CONFIG)");
    if (with_pool) app.add_option("-p,--pool", pool, "disk pool");
  }
  void load() {
    deployment = site::load_deployment(site::config_path(config));
    connector = std::make_shared<Connector>();
  }
  rfio::RfioClient client() const { return rfio::RfioClient(deployment.client_options(connector, pool)); }
};

}  // namespace castor::tools
