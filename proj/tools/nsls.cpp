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

#include "castor/ns/service.hpp"
#include "client_main.hpp"

namespace {

std::string perms(const castor::ns::NsEntry& e) {
  std::string s = e.is_dir() ? "d" : "-";
  const char* rwx = "rwx";
  for (int i = 8; i >= 0; --i) s += (e.mode >> i) & 1u ? rwx[(8 - i) % 3] : '-';
  return s;
}

// -l columns: mode uid gid size file_id crc32 name.
void print(const castor::ns::NsEntry& e, bool long_format) {
  if (!long_format) {
    std::cout << e.name << "\n";
    return;
  }
  const std::string crc = e.checksum ? fmt::format("{:08x}", *e.checksum) : "-";
  std::cout << fmt::format("{} {:>5} {:>5} {:>14} {:>12} {:>8} {}\n", perms(e), e.uid, e.gid, e.size_bytes, e.file_id,
                           crc, e.name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"List a name server directory", "nsls"};
  castor::tools::ClientEnv env;
  env.add_options(app);
  std::string path;
  bool long_format = false;
  bool directory = false;
  app.add_flag("-l", long_format, "long listing");
  app.add_flag("-d", directory, "list a directory itself, not its entries");
  app.add_option("path", path)->required();
  return castor::tools::run_tool(app, argc, argv, [&] {
    env.load();
    castor::ns::NsClient ns(env.deployment.routes(), env.connector);
    const auto entry = ns.stat(path);
    if (!entry.is_dir() || directory) {
      print(entry, long_format);
      return;
    }
    for (const auto& e : ns.list_dir(path)) print(e, long_format);
  });
}
