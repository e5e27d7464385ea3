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

#include "castor/mover/service.hpp"
#include "castor/site/site.hpp"
#include "daemon_main.hpp"

// One mover process drives every tape drive of the plant.
int main(int argc, char** argv) {
  CLI::App app{"Tape mover daemon", "castor_moverd"};
  castor::tools::DaemonArgs args;
  castor::tools::add_daemon_options(app, args);
  return castor::tools::run_tool(app, argc, argv, [&] {
    const auto signals = castor::tools::block_signals();
    const auto d = castor::site::load_deployment(castor::site::config_path(args.config));
    auto connector = std::make_shared<castor::Connector>();
    castor::mover::Mover mover(castor::mover::MoverOptions{d.root / "tapes", d.sync,
                                                           std::make_shared<castor::mover::RemoteDiskAccess>(connector)});
    for (const auto& drive : d.plant.drives()) {
      mover.add_drive(drive.drive_name, drive.model, castor::site::timing_for(d.plant, drive.model, {}));
    }
    auto dispatcher = castor::mover::make_dispatcher(mover);
    castor::tools::serve("castor_moverd", dispatcher, d.mover_address, signals);
  });
}
