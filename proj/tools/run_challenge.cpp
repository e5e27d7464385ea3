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

#include <chrono>
#include <iostream>

#include "castor/tools/challenge.hpp"
#include "tool_main.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Replay a data-challenge workload on the virtual clock", "run_challenge"};
  std::string workload = "empty";
  bool json = false;
  bool list = false;
  bool print = false;
  std::optional<uint64_t> seed;
  std::string work_dir;
  app.add_option("-w,--workload", workload, "built-in name or workload file");
  app.add_flag("--json", json, "print the report as one JSON document");
  app.add_option("--seed", seed, "override the workload seed");
  app.add_option("--work-dir", work_dir, "keep the simulated site in this directory");
  app.add_flag("--list", list, "list built-in workloads");
  app.add_flag("--print-workload", print, "print the built-in workload text");
  return castor::tools::run_tool(app, argc, argv, [&] {
    using namespace castor::challenge;
    if (list) {
      for (const auto& n : builtin_workloads()) std::cout << n << "\n";
      return;
    }
    if (print) {
      std::cout << builtin_workload_text(workload);
      return;
    }
    auto spec = load_workload(workload);
    if (seed) spec.seed = *seed;
    const auto t0 = std::chrono::steady_clock::now();
    const auto report = run_challenge(spec, RunOptions{work_dir});
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (json) {
      std::cout << to_json(report).dump(2) << "\n";
    } else {
      std::cout << to_text(report);
    }
    std::cerr << "wall clock " << wall << " s\n";
  });
}
