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
  CLI::App app{"Copy files to, from or within the castor namespace", "rfcp"};
  castor::tools::ClientEnv env;
  env.add_options(app, true);
  std::string src;
  std::string dst;
  size_t buffer = 1 << 20;
  app.add_option("source", src)->required();
  app.add_option("destination", dst)->required();
  app.add_option("-b,--buffer", buffer, "transfer buffer bytes");
  return castor::tools::run_tool(app, argc, argv, [&] {
    env.load();
    auto client = env.client();
    const auto r = castor::rfio::rfcp(client, src, dst, buffer);
    std::cout << fmt::format("{} bytes crc32 {:08x} in {:.3f} s\n", r.bytes, r.crc32, r.seconds);
  });
}
