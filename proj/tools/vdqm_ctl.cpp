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

#include <iostream>
#include <spdlog/fmt/fmt.h>

#include "castor/vdqm/service.hpp"
#include "client_main.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Drive queue administration", "vdqm_ctl"};
  castor::tools::ClientEnv env;
  env.add_options(app);
  app.require_subcommand(1);
  auto* drives = app.add_subcommand("drives", "drives: name server model state vid");
  auto* queue = app.add_subcommand("queue", "requests in submit order: req_id seq vid access model client drive");
  std::string drive;
  std::string state;
  auto* set = app.add_subcommand("state", "set a drive UP_FREE or DOWN");
  set->add_option("drive", drive)->required();
  set->add_option("state", state)->required();

  return castor::tools::run_tool(app, argc, argv, [&] {
    env.load();
    castor::vdqm::VdqmClient vdqm(env.connector->connect(env.deployment.vdqm_address));
    if (set->parsed()) {
      vdqm.set_drive_state(drive, castor::vdqm::parse_state(state));
      return;
    }
    const auto snap = vdqm.queue_snapshot();
    if (drives->parsed()) {
      for (const auto& d : snap.drives) {
        std::cout << fmt::format("{} {} {} {} {}\n", d.drive_name, d.server_name, d.model, castor::vdqm::state_name(d.state),
                                 d.mounted_vid.empty() ? "-" : d.mounted_vid);
      }
    } else if (queue->parsed()) {
      for (const auto& r : snap.requests) {
        std::cout << fmt::format("{} {} {} {} {} {} {}\n", r.req_id, r.submit_seq, r.vid, castor::vdqm::access_name(r.access),
                                 r.model, r.client_addr, r.assigned_drive.empty() ? "-" : r.assigned_drive);
      }
    }
  });
}
