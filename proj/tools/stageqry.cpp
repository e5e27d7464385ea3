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

#include "client_main.hpp"

// One line per disk copy: file_id state size server path.
int main(int argc, char** argv) {
  CLI::App app{"List disk copies held by the stager", "stageqry"};
  castor::tools::ClientEnv env;
  env.add_options(app, true);
  return castor::tools::run_tool(app, argc, argv, [&] {
    env.load();
    auto client = env.client();
    for (const auto& c : client.stager().query(env.pool)) {
      std::cout << fmt::format("{} {} {} {} {}\n", c.file_id, castor::stager::state_name(c.state), c.size_bytes,
                               c.server, c.path);
    }
  });
}
