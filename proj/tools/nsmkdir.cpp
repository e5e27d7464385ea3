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

#include "castor/ns/service.hpp"
#include "client_main.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Create name server directories", "nsmkdir"};
  castor::tools::ClientEnv env;
  env.add_options(app);
  std::vector<std::string> paths;
  bool parents = false;
  uint32_t mode = 0755;
  app.add_flag("-p", parents, "create missing parents; no error if the directory exists");
  app.add_option("-m,--mode", mode, "permission bits");
  app.add_option("paths", paths)->required();
  return castor::tools::run_tool(app, argc, argv, [&] {
    env.load();
    castor::ns::NsClient ns(env.deployment.routes(), env.connector);
    for (const auto& path : paths) {
      if (!parents) {
        ns.mkdir(path, mode);
        continue;
      }
      std::string prefix;
      size_t pos = 0;
      while (pos < path.size()) {
        const size_t next = path.find('/', pos + 1);
        prefix = path.substr(0, next);
        pos = next == std::string::npos ? path.size() : next;
        try {
          if (ns.stat(prefix).is_dir()) continue;
          castor::raise(castor::Errc::kNotADirectory, prefix + " is not a directory");
        } catch (const castor::CastorError& e) {
          if (e.code() != castor::Errc::kNotFound) throw;
        }
        ns.mkdir(prefix, mode);
      }
    }
  });
}
