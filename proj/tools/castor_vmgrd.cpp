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

#include "castor/site/site.hpp"
#include "castor/vmgr/service.hpp"
#include "daemon_main.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Volume manager daemon", "castor_vmgrd"};
  castor::tools::DaemonArgs args;
  castor::tools::add_daemon_options(app, args);
  return castor::tools::run_tool(app, argc, argv, [&] {
    const auto signals = castor::tools::block_signals();
    const auto d = castor::site::load_deployment(castor::site::config_path(args.config));
    castor::vmgr::RegistryOptions opt;
    opt.reserve_fraction = d.plant.reserve_fraction;
    opt.journal_dir = d.root / "journal" / "vmgr";
    opt.journal = castor::JournalOptions{d.sync, d.snapshot_every};
    castor::vmgr::Registry registry(opt);
    castor::site::seed_registry(registry, d.plant);
    auto dispatcher = castor::vmgr::make_dispatcher(registry, d.plant);
    castor::tools::serve("castor_vmgrd", dispatcher, d.vmgr_address, signals);
  });
}
