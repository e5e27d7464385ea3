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

#include "client_main.hpp"
#include "stage_print.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Reserve disk space for writing a file", "stageout"};
  castor::tools::ClientEnv env;
  env.add_options(app, true);
  std::string path;
  uint64_t size = 0;
  app.add_option("-s,--size", size, "expected size in bytes");
  app.add_option("path", path)->required();
  return castor::tools::run_tool(app, argc, argv, [&] {
    env.load();
    auto client = env.client();
    castor::tools::print_location(client.stager().stage_out(path, size, env.pool));
  });
}
