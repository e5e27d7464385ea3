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

#include "castor/mover/service.hpp"
#include "castor/ns/catalog.hpp"
#include "castor/ns/service.hpp"
#include "castor/rfio/client.hpp"
#include "castor/rfio/disk_server.hpp"
#include "castor/stager/service.hpp"
#include "castor/vdqm/queue.hpp"
#include "castor/vdqm/service.hpp"
#include "castor/vmgr/plant.hpp"
#include "castor/vmgr/registry.hpp"
#include "castor/vmgr/service.hpp"

// A whole installation in one process: every daemon behind a loopback
// address of one connector.
namespace castor::site {

struct SiteOptions {
  std::filesystem::path root;  // tapes/, disk/ and journal/ live here
  vmgr::Plant plant;
  // Relative filesystem mounts are placed under <root>/disk.
  std::vector<stager::DiskPool> pools;
  std::string domain = "cern.ch";
  std::vector<std::string> top_dirs = {"user"};
  bool persistent = false;  // journals for the name server, vmgr and stager
  bool sync = false;
  size_t snapshot_every = 10000;
  mover::DriveTiming timing;  // buffers and realtime factor; rates come from the plant
  int64_t start_us = 0;
  bool auto_migrate = true;
  const Clock* wall = nullptr;
  std::chrono::milliseconds block_timeout{120000};
};

// Adds the plant's pools and volumes the registry does not have yet.
void seed_registry(vmgr::Registry& registry, const vmgr::Plant& plant);
void seed_queue(vdqm::Queue& queue, const vmgr::Plant& plant);
mover::DriveTiming timing_for(const vmgr::Plant& plant, const std::string& model, const mover::DriveTiming& base);

class Site {
 public:
  explicit Site(SiteOptions options);
  ~Site();

  const SiteOptions& options() const { return options_; }
  std::shared_ptr<Connector> connector() const { return connector_; }
  const ns::RouteTable& routes() const { return routes_; }
  rfio::ClientOptions client_options() const;

  ns::Catalog& catalog() { return *catalog_; }
  vmgr::Registry& registry() { return *registry_; }
  vdqm::Queue& queue() { return *queue_; }
  mover::Mover& mover() { return *mover_; }
  stager::Stager& stager() { return *stager_; }

  // Drops the stager without any shutdown work and builds a new one from its
  // journal, as after a crash.
  void restart_stager();
  // Same for the name server; its clients reconnect through the connector.
  void restart_nameserver();

 private:
  stager::StagerOptions stager_options() const;

  SiteOptions options_;
  std::shared_ptr<Connector> connector_;
  ns::RouteTable routes_;
  std::unique_ptr<ns::Catalog> catalog_;
  Dispatcher ns_dispatcher_;
  std::unique_ptr<vmgr::Registry> registry_;
  Dispatcher vmgr_dispatcher_;
  std::unique_ptr<vdqm::Queue> queue_;
  Dispatcher vdqm_dispatcher_;
  std::unique_ptr<mover::Mover> mover_;
  Dispatcher mover_dispatcher_;
  std::map<std::string, std::unique_ptr<rfio::DiskServer>> disks_;
  std::unique_ptr<stager::Stager> stager_;
  Dispatcher stager_dispatcher_;
};

}  // namespace castor::site
