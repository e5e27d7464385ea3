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

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "castor/ns/path.hpp"
#include "castor/rfio/client.hpp"
#include "castor/stager/types.hpp"
#include "castor/vmgr/plant.hpp"

// An installation spread over daemon processes, described by one config file.
namespace castor::site {

// Sections: [site] root plant domain top_dirs sync snapshot_every;
// [nsd] [vmgrd] [vdqmd] [moverd] [stagerd] listen = "host:port";
// [rfiod.SERVER] listen; [diskpool.NAME] as for the stager. Relative root and
// plant paths resolve against the config file; disk mounts are placed under
// <root>/disk.
struct Deployment {
  std::filesystem::path root;
  vmgr::Plant plant;
  std::string domain = "cern.ch";
  std::vector<std::string> top_dirs = {"user"};
  bool sync = true;
  size_t snapshot_every = 10000;
  std::string ns_address;
  std::string vmgr_address;
  std::string vdqm_address;
  std::string mover_address;
  std::string stager_address;
  std::map<std::string, std::string> rfiod_addresses;
  std::vector<stager::DiskPool> pools;

  ns::RouteTable routes() const;
  std::vector<std::string> implicit_dirs() const;
  rfio::ClientOptions client_options(std::shared_ptr<Connector> connector, const std::string& pool = "") const;
};

Deployment parse_deployment(const Config& config, const std::filesystem::path& base_dir);
Deployment load_deployment(const std::filesystem::path& path);
// The --config value, else $CASTOR_CONFIG; InvalidArgument when neither is set.
std::filesystem::path config_path(const std::string& option);

}  // namespace castor::site
