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
#include <set>
#include <spdlog/fmt/fmt.h>

#include "castor/vmgr/service.hpp"
#include "client_main.hpp"

namespace {

void print_plant(const std::vector<castor::vmgr::DrivePlantModel>& models) {
  std::cout << fmt::format("{:<8} {:>6} {:>7} {:>9} {:>7} {:>11}\n", "MODEL", "DRIVES", "SERVERS", "RATE_MB/s", "MOUNT_s",
                           "CAPACITY_GB");
  uint32_t drives = 0;
  uint32_t servers = 0;
  for (const auto& m : models) {
    std::cout << fmt::format("{:<8} {:>6} {:>7} {:>9.1f} {:>7.1f} {:>11.1f}\n", m.model, m.drives, m.servers,
                             m.streaming_rate_bytes_per_s / 1e6, m.mount_seconds, static_cast<double>(m.capacity_bytes) / 1e9);
    drives += m.drives;
    servers += m.servers;
  }
  std::cout << fmt::format("total: {} models, {} drives, {} servers\n", models.size(), drives, servers);
}

std::string flags_text(uint32_t flags) {
  std::string s;
  for (const auto& n : castor::vmgr::flag_names(flags)) s += (s.empty() ? "" : "|") + n;
  return s.empty() ? "-" : s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Volume manager administration", "vmgr_ctl"};
  castor::tools::ClientEnv env;
  env.add_options(app);
  app.require_subcommand(1);

  std::string plant_file;
  auto* list = app.add_subcommand("list", "drive models of the plant with totals");
  list->add_option("--plant", plant_file, "read a plant file instead of asking the daemon");

  std::string pool;
  auto* volumes = app.add_subcommand("volumes", "tape volumes: vid pool model capacity free next_fseq flags");
  volumes->add_option("pool", pool, "only this pool");

  castor::vmgr::TapeVolume vol;
  auto* add = app.add_subcommand("add", "register a volume");
  add->add_option("vid", vol.vid)->required();
  add->add_option("--pool", vol.pool)->required();
  add->add_option("--model", vol.model)->required();
  add->add_option("--capacity", vol.capacity_bytes)->required();

  std::string vid;
  std::vector<std::string> flags;
  auto* status = app.add_subcommand("status", "show or replace a volume's flags");
  status->add_option("vid", vid)->required();
  status->add_option("flags", flags, "FREE BUSY FULL RDONLY DISABLED EXPORTED");

  return castor::tools::run_tool(app, argc, argv, [&] {
    if (list->parsed() && !plant_file.empty()) {
      print_plant(castor::vmgr::load_plant_file(plant_file).models);
      return;
    }
    env.load();
    castor::vmgr::VmgrClient vmgr(env.connector->connect(env.deployment.vmgr_address));
    if (list->parsed()) {
      print_plant(vmgr.plant_models());
    } else if (volumes->parsed()) {
      for (const auto& v : vmgr.list(pool)) {
        std::cout << fmt::format("{} {} {} {} {} {} {}\n", v.vid, v.pool, v.model, v.capacity_bytes, v.free_bytes,
                                 v.next_fseq, flags_text(v.status));
      }
    } else if (add->parsed()) {
      vol.free_bytes = vol.capacity_bytes;
      vmgr.add_volume(vol);
    } else if (status->parsed()) {
      if (!flags.empty()) vmgr.set_status(vid, castor::vmgr::parse_flags(flags));
      const auto v = vmgr.query(vid);
      std::cout << v.vid << " " << flags_text(v.status) << "\n";
    }
  });
}
