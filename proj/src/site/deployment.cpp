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

#include "castor/site/deployment.hpp"

#include <cstdlib>

#include "castor/common/error.hpp"

namespace castor::site {

namespace {

std::string listen_of(const Config& c, const std::string& section) {
  if (!c.has(section, "listen")) raise(Errc::kSpecInvalid, "[" + section + "] needs listen = \"host:port\"");
  const auto addr = c.get_string(section, "listen");
  net::parse_host_port(addr);
  return addr;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() ? base / path : path;
}

}  // namespace

ns::RouteTable Deployment::routes() const {
  ns::RouteTable t;
  for (const auto& top : top_dirs) t.add({domain, top, ns_address, 0});
  return t;
}

std::vector<std::string> Deployment::implicit_dirs() const {
  std::vector<std::string> dirs;
  for (const auto& top : top_dirs) dirs.push_back("/castor/" + domain + "/" + top);
  return dirs;
}

rfio::ClientOptions Deployment::client_options(std::shared_ptr<Connector> connector, const std::string& pool) const {
  return rfio::ClientOptions{std::move(connector), routes(), stager_address, pool};
}

Deployment parse_deployment(const Config& config, const std::filesystem::path& base_dir) {
  Deployment d;
  if (!config.has("site", "root")) raise(Errc::kSpecInvalid, "[site] needs root");
  d.root = resolve(base_dir, config.get_string("site", "root"));
  d.plant = vmgr::load_plant_file(resolve(base_dir, config.get_string("site", "plant", "plant_default.conf")));
  d.domain = config.get_string("site", "domain", d.domain);
  if (config.has("site", "top_dirs")) d.top_dirs = config.get_strings("site", "top_dirs");
  d.sync = config.get_bool("site", "sync", d.sync);
  d.snapshot_every = static_cast<size_t>(config.get_int("site", "snapshot_every", static_cast<int64_t>(d.snapshot_every)));
  d.ns_address = listen_of(config, "nsd");
  d.vmgr_address = listen_of(config, "vmgrd");
  d.vdqm_address = listen_of(config, "vdqmd");
  d.mover_address = listen_of(config, "moverd");
  d.stager_address = listen_of(config, "stagerd");
  for (const auto& section : config.sections_with_prefix("rfiod.")) {
    d.rfiod_addresses[section.substr(std::string("rfiod.").size())] = listen_of(config, section);
  }
  d.pools = stager::load_pools(config);
  for (auto& p : d.pools) {
    for (auto& fs : p.filesystems) {
      if (!d.rfiod_addresses.count(fs.server)) {
        raise(Errc::kSpecInvalid, "disk pool " + p.name + " uses server " + fs.server + " without an [rfiod." + fs.server + "] section");
      }
      fs.mount = (d.root / "disk" / std::filesystem::path(fs.mount).relative_path()).string();
    }
  }
  return d;
}

Deployment load_deployment(const std::filesystem::path& path) {
  return parse_deployment(Config::load(path), std::filesystem::absolute(path).parent_path());
}

std::filesystem::path config_path(const std::string& option) {
  if (!option.empty()) return option;
  if (const char* env = std::getenv("CASTOR_CONFIG"); env != nullptr && *env != '\0') return env;
  raise(Errc::kInvalidArgument, "no deployment config: pass --config or set CASTOR_CONFIG");
}

}  // namespace castor::site
