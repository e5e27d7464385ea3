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

#include "castor/ns/service.hpp"
#include "daemon_main.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Name server daemon", "castor_nsd"};
  castor::tools::DaemonArgs args;
  castor::tools::add_daemon_options(app, args);
  return castor::tools::run_tool(app, argc, argv, [&] {
    const auto signals = castor::tools::block_signals();
    const auto d = castor::site::load_deployment(castor::site::config_path(args.config));
    castor::ns::CatalogOptions opt;
    opt.implicit_dirs = d.implicit_dirs();
    opt.journal_dir = d.root / "journal" / "ns";
    opt.journal = castor::JournalOptions{d.sync, d.snapshot_every};
    castor::ns::Catalog catalog(opt);
    auto dispatcher = castor::ns::make_dispatcher(catalog);
    castor::tools::serve("castor_nsd", dispatcher, d.ns_address, signals);
  });
}
