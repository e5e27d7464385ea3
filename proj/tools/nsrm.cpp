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

namespace {

void remove_tree(castor::ns::NsClient& ns, const std::string& path) {
  for (const auto& e : ns.list_dir(path)) {
    const std::string child = path + "/" + e.name;
    if (e.is_dir()) {
      remove_tree(ns, child);
    } else {
      ns.unlink(child);
    }
  }
  ns.rmdir(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Remove name server entries", "nsrm"};
  castor::tools::ClientEnv env;
  env.add_options(app);
  std::vector<std::string> paths;
  bool recursive = false;
  app.add_flag("-r", recursive, "remove directories and their contents");
  app.add_option("paths", paths)->required();
  return castor::tools::run_tool(app, argc, argv, [&] {
    env.load();
    castor::ns::NsClient ns(env.deployment.routes(), env.connector);
    for (auto path : paths) {
      while (path.size() > 1 && path.back() == '/') path.pop_back();
      if (!ns.stat(path).is_dir()) {
        ns.unlink(path);
      } else if (recursive) {
        remove_tree(ns, path);
      } else {
        castor::raise(castor::Errc::kIsADirectory, path + " is a directory (use -r)");
      }
    }
  });
}
