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
  CLI::App app{"Stager administration", "stager_ctl"};
  castor::tools::ClientEnv env;
  env.add_options(app, true);
  app.require_subcommand(1);
  auto* migrate = app.add_subcommand("migrate", "write a pool's pending files to tape and wait");
  auto* gc = app.add_subcommand("gc", "evict staged copies down to the low watermark");
  std::string path;
  auto* purge = app.add_subcommand("purge", "evict the staged copy of one file");
  purge->add_option("path", path)->required();
  auto* stats = app.add_subcommand("stats", "counters as JSON");
  return castor::tools::run_tool(app, argc, argv, [&] {
    env.load();
    auto client = env.client();
    auto& st = client.stager();
    if (migrate->parsed()) {
      const auto r = st.run_migrator(env.pool);
      std::cout << "files " << r.files << "\nbytes " << r.bytes << "\ntapes";
      for (const auto& v : r.tapes_used) std::cout << " " << v;
      std::cout << "\n";
      if (!r.error.empty()) castor::raise(castor::Errc::kNoEligibleVolume, r.error);
    } else if (gc->parsed()) {
      const auto r = st.run_gc(env.pool);
      std::cout << "evicted " << r.evicted_files << "\nfreed " << r.freed_bytes << "\n";
    } else if (purge->parsed()) {
      const auto r = st.purge(path);
      std::cout << "evicted " << r.evicted_files << "\nfreed " << r.freed_bytes << "\n";
    } else if (stats->parsed()) {
      std::cout << castor::Json(st.stats()).dump() << "\n";
    }
  });
}
