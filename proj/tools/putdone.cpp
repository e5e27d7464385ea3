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

int main(int argc, char** argv) {
  CLI::App app{"Declare a staged-out file complete", "putdone"};
  castor::tools::ClientEnv env;
  env.add_options(app);
  std::string path;
  app.add_option("path", path)->required();
  return castor::tools::run_tool(app, argc, argv, [&] {
    env.load();
    auto client = env.client();
    const auto d = client.stager().put_done(path);
    std::cout << fmt::format("{} {:08x}\n", d.size, d.crc32);
  });
}
