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

#include <thread>

#include "castor/common/clock.hpp"
#include "castor/stager/service.hpp"
#include "daemon_main.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stager daemon", "castor_stagerd"};
  castor::tools::DaemonArgs args;
  double wait_s = 30;
  castor::tools::add_daemon_options(app, args);
  app.add_option("--wait-peers", wait_s, "seconds to wait for the other daemons at startup");
  return castor::tools::run_tool(app, argc, argv, [&] {
    const auto signals = castor::tools::block_signals();
    const auto d = castor::site::load_deployment(castor::site::config_path(args.config));
    static const castor::WallClock wall;
    castor::stager::StagerOptions opt;
    opt.pools = d.pools;
    opt.connector = std::make_shared<castor::Connector>();
    opt.ns_routes = d.routes();
    opt.vmgr_address = d.vmgr_address;
    opt.vdqm_address = d.vdqm_address;
    opt.mover_addresses = {{"*", d.mover_address}};
    opt.disk_addresses = d.rfiod_addresses;
    opt.client_name = "stager@" + d.stager_address;
    opt.journal_dir = d.root / "journal" / "stager";
    opt.journal = castor::JournalOptions{d.sync, d.snapshot_every};
    opt.wall = &wall;
    opt.start_us = wall.now_us();
    // Recovery talks to the name server, vmgr and vdqm; they may still be starting.
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(wait_s);
    std::unique_ptr<castor::stager::Stager> stager;
    for (;;) {
      try {
        stager = std::make_unique<castor::stager::Stager>(opt);
        break;
      } catch (const castor::CastorError& e) {
        if (e.code() != castor::Errc::kEnvironmentDown || std::chrono::steady_clock::now() > deadline) throw;
        std::this_thread::sleep_for(std::chrono::milliseconds(200));
      }
    }
    stager->start_background();
    auto dispatcher = castor::stager::make_dispatcher(*stager);
    castor::tools::serve("castor_stagerd", dispatcher, d.stager_address, signals);
    stager->stop_background();
  });
}
