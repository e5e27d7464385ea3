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

#include "client_main.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Copy every file of a volume onto other media", "repack_ctl"};
  castor::tools::ClientEnv env;
  env.add_options(app);
  std::string vid;
  std::string target;
  std::string disk_pool;
  bool json = false;
  app.add_option("vid", vid)->required();
  app.add_option("target_pool", target, "tape pool receiving the data")->required();
  app.add_option("-d,--disk-pool", disk_pool, "disk pool used for staging");
  app.add_flag("--json", json, "print the report as JSON");
  return castor::tools::run_tool(app, argc, argv, [&] {
    env.load();
    auto client = env.client();
    const auto r = client.stager().repack(vid, target, disk_pool);
    if (json) {
      std::cout << castor::Json(r).dump() << "\n";
    } else {
      std::cout << "files_moved " << r.files_moved << "\nbytes " << r.bytes << "\nnew_vids";
      for (const auto& v : r.new_vids) std::cout << " " << v;
      std::cout << "\nfailed_files";
      for (auto f : r.failed_files) std::cout << " " << f;
      std::cout << "\nexported " << (r.exported ? "yes" : "no") << "\n";
      if (!r.error.empty()) std::cout << "error " << r.error << "\n";
    }
  });
}
