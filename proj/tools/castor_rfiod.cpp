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

#include "castor/rfio/disk_server.hpp"
#include "daemon_main.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Disk server daemon", "castor_rfiod"};
  castor::tools::DaemonArgs args;
  castor::tools::add_daemon_options(app, args);
  app.add_option("-s,--server", args.server, "disk server name from the config")->required();
  return castor::tools::run_tool(app, argc, argv, [&] {
    const auto signals = castor::tools::block_signals();
    const auto d = castor::site::load_deployment(castor::site::config_path(args.config));
    const auto it = d.rfiod_addresses.find(args.server);
    if (it == d.rfiod_addresses.end()) castor::raise(castor::Errc::kNotFound, "no [rfiod." + args.server + "] section");
    std::filesystem::create_directories(d.root / "disk");
    castor::rfio::DiskServer server(castor::rfio::DiskServerOptions{{d.root / "disk"}});
    castor::tools::serve("castor_rfiod " + args.server, server, it->second, signals);
  });
}
