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

#include "castor/site/site.hpp"

#include "castor/common/error.hpp"

namespace castor::site {

void seed_registry(vmgr::Registry& registry, const vmgr::Plant& plant) {
  std::set<std::string> known;
  for (const auto& p : registry.pools()) known.insert(p.name);
  for (const auto& spec : plant.pools) {
    if (!known.count(spec.pool.name)) registry.add_pool(spec.pool);
  }
  for (const auto& v : plant.volumes()) registry.ensure_volume(v);
}

void seed_queue(vdqm::Queue& queue, const vmgr::Plant& plant) {
  for (const auto& d : plant.drives()) {
    queue.register_drive(vdqm::DriveRecord{.drive_name = d.drive_name,
                                           .server_name = d.server_name,
                                           .model = d.model,
                                           .state = vdqm::DriveState::kUpFree});
  }
}

mover::DriveTiming timing_for(const vmgr::Plant& plant, const std::string& model, const mover::DriveTiming& base) {
  const auto& m = plant.model(model);
  mover::DriveTiming t = base;
  t.mount_seconds = m.mount_seconds;
  t.unmount_seconds = m.mount_seconds * plant.unmount_fraction;
  t.position_seconds_per_fseq = m.position_seconds_per_fseq;
  t.streaming_rate_bytes_per_s = m.streaming_rate_bytes_per_s;
  return t;
}

Site::Site(SiteOptions options) : options_(std::move(options)), connector_(std::make_shared<Connector>()) {
  const auto& root = options_.root;
  std::filesystem::create_directories(root / "tapes");
  std::filesystem::create_directories(root / "disk");
  JournalOptions jopt{options_.sync, options_.snapshot_every};

  std::vector<std::string> implicit;
  for (const auto& top : options_.top_dirs) {
    implicit.push_back("/castor/" + options_.domain + "/" + top);
    routes_.add({options_.domain, top, "loop://ns", 0});
  }
  ns::CatalogOptions nopt;
  nopt.implicit_dirs = implicit;
  if (options_.persistent) nopt.journal_dir = root / "journal" / "ns";
  nopt.journal = jopt;
  nopt.clock = options_.wall;
  catalog_ = std::make_unique<ns::Catalog>(nopt);
  ns_dispatcher_ = ns::make_dispatcher(*catalog_);
  connector_->register_loopback("ns", &ns_dispatcher_);

  vmgr::RegistryOptions vopt;
  vopt.reserve_fraction = options_.plant.reserve_fraction;
  if (options_.persistent) vopt.journal_dir = root / "journal" / "vmgr";
  vopt.journal = jopt;
  registry_ = std::make_unique<vmgr::Registry>(vopt);
  seed_registry(*registry_, options_.plant);
  vmgr_dispatcher_ = vmgr::make_dispatcher(*registry_, options_.plant);
  connector_->register_loopback("vmgr", &vmgr_dispatcher_);

  queue_ = std::make_unique<vdqm::Queue>(vdqm::QueueOptions{.reads = options_.plant.reads, .models = {}});
  seed_queue(*queue_, options_.plant);
  vdqm_dispatcher_ = vdqm::make_dispatcher(*queue_);
  connector_->register_loopback("vdqm", &vdqm_dispatcher_);

  mover_ = std::make_unique<mover::Mover>(
      mover::MoverOptions{root / "tapes", options_.sync, std::make_shared<mover::RemoteDiskAccess>(connector_)});
  for (const auto& d : options_.plant.drives()) {
    mover_->add_drive(d.drive_name, d.model, timing_for(options_.plant, d.model, options_.timing));
  }
  mover_dispatcher_ = mover::make_dispatcher(*mover_);
  connector_->register_loopback("mover", &mover_dispatcher_);

  for (auto& pool : options_.pools) {
    for (auto& fs : pool.filesystems) {
      if (std::filesystem::path(fs.mount).is_relative()) fs.mount = (root / "disk" / fs.mount).string();
      auto& disk = disks_[fs.server];
      if (!disk) {
        disk = std::make_unique<rfio::DiskServer>(rfio::DiskServerOptions{{root / "disk"}});
        connector_->register_loopback("rfiod-" + fs.server, disk.get());
      }
    }
  }
  stager_ = std::make_unique<stager::Stager>(stager_options());
  stager_dispatcher_ = stager::make_dispatcher(*stager_);
  connector_->register_loopback("stager", &stager_dispatcher_);
}

Site::~Site() {
  if (stager_) stager_->stop_background();
}

stager::StagerOptions Site::stager_options() const {
  stager::StagerOptions s;
  s.pools = options_.pools;
  s.connector = connector_;
  s.ns_routes = routes_;
  s.vmgr_address = "loop://vmgr";
  s.vdqm_address = "loop://vdqm";
  s.mover_addresses = {{"*", "loop://mover"}};
  for (const auto& [server, disk] : disks_) s.disk_addresses[server] = "loop://rfiod-" + server;
  if (options_.persistent) s.journal_dir = options_.root / "journal" / "stager";
  s.journal = JournalOptions{options_.sync, options_.snapshot_every};
  s.wall = options_.wall;
  s.start_us = options_.start_us;
  s.block_timeout = options_.block_timeout;
  s.auto_migrate = options_.auto_migrate;
  return s;
}

rfio::ClientOptions Site::client_options() const {
  return rfio::ClientOptions{connector_, routes_, "loop://stager", ""};
}

void Site::restart_stager() {
  if (!options_.persistent) raise(Errc::kInvalidArgument, "restart needs a persistent site");
  stager_->stop_background();
  stager_.reset();
  stager_ = std::make_unique<stager::Stager>(stager_options());
  stager_dispatcher_ = stager::make_dispatcher(*stager_);
}

void Site::restart_nameserver() {
  if (!options_.persistent) raise(Errc::kInvalidArgument, "restart needs a persistent site");
  ns::CatalogOptions nopt;
  for (const auto& top : options_.top_dirs) nopt.implicit_dirs.push_back("/castor/" + options_.domain + "/" + top);
  nopt.journal_dir = options_.root / "journal" / "ns";
  nopt.journal = JournalOptions{options_.sync, options_.snapshot_every};
  nopt.clock = options_.wall;
  catalog_.reset();
  catalog_ = std::make_unique<ns::Catalog>(nopt);
  ns_dispatcher_ = ns::make_dispatcher(*catalog_);
}

}  // namespace castor::site
