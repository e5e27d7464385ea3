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

#include "castor/vmgr/service.hpp"

namespace castor::vmgr {

void to_json(Json& j, const DriveSpec& d) {
  j = Json{{"drive_name", d.drive_name}, {"server_name", d.server_name}, {"model", d.model}};
}

void from_json(const Json& j, DriveSpec& d) {
  d.drive_name = j.at("drive_name").get<std::string>();
  d.server_name = j.at("server_name").get<std::string>();
  d.model = j.at("model").get<std::string>();
}

Dispatcher make_dispatcher(Registry& registry, const Plant& plant) {
  Dispatcher d;
  d.add("vmgr.ping", [](const Json&) { return Json("pong"); });
  d.add("vmgr.add_pool", [&registry](const Json& a) {
    registry.add_pool(arg<TapePool>(a, "pool"));
    return Json();
  });
  d.add("vmgr.add_volume", [&registry](const Json& a) {
    registry.add_volume(arg<TapeVolume>(a, "volume"));
    return Json();
  });
  d.add("vmgr.set_status", [&registry](const Json& a) {
    registry.set_status(arg<std::string>(a, "vid"), parse_flags(arg<std::vector<std::string>>(a, "status")));
    return Json();
  });
  d.add("vmgr.query", [&registry](const Json& a) { return Json(registry.query(arg<std::string>(a, "vid"))); });
  d.add("vmgr.list", [&registry](const Json& a) { return Json(registry.list(arg_or<std::string>(a, "pool", ""))); });
  d.add("vmgr.pools", [&registry](const Json&) { return Json(registry.pools()); });
  d.add("vmgr.select", [&registry](const Json& a) {
    return Json(registry.select_tape_for_migration(arg<std::string>(a, "pool"), arg<uint64_t>(a, "requested_bytes"),
                                                   arg_or<std::vector<std::string>>(a, "exclude_vids", {})));
  });
  d.add("vmgr.update_after_write", [&registry](const Json& a) {
    registry.update_after_write(arg<std::string>(a, "vid"), arg<uint64_t>(a, "bytes_written"),
                                arg<uint32_t>(a, "files_written"), arg_or<bool>(a, "keep_busy", false));
    return Json();
  });
  d.add("vmgr.release", [&registry](const Json& a) {
    registry.release(arg<std::string>(a, "vid"));
    return Json();
  });
  d.add("vmgr.plant", [&plant](const Json&) { return Json{{"models", plant.models}, {"drives", plant.drives()}}; });
  return d;
}

void VmgrClient::add_pool(const TapePool& pool) { rpc_.call("vmgr.add_pool", {{"pool", pool}}); }

void VmgrClient::add_volume(const TapeVolume& volume) { rpc_.call("vmgr.add_volume", {{"volume", volume}}); }

void VmgrClient::set_status(const std::string& vid, uint32_t flags) {
  rpc_.call("vmgr.set_status", {{"vid", vid}, {"status", flag_names(flags)}});
}

TapeVolume VmgrClient::query(const std::string& vid) { return rpc_.call("vmgr.query", {{"vid", vid}}).get<TapeVolume>(); }

std::vector<TapeVolume> VmgrClient::list(const std::string& pool) {
  return rpc_.call("vmgr.list", {{"pool", pool}}).get<std::vector<TapeVolume>>();
}

std::vector<TapePool> VmgrClient::pools() { return rpc_.call("vmgr.pools").get<std::vector<TapePool>>(); }

TapeVolume VmgrClient::select_tape_for_migration(const std::string& pool, uint64_t requested_bytes,
                                                 const std::vector<std::string>& exclude_vids) {
  return rpc_.call("vmgr.select", {{"pool", pool}, {"requested_bytes", requested_bytes}, {"exclude_vids", exclude_vids}})
      .get<TapeVolume>();
}

void VmgrClient::update_after_write(const std::string& vid, uint64_t bytes_written, uint32_t files_written,
                                    bool keep_busy) {
  rpc_.call("vmgr.update_after_write", {{"vid", vid},
                                        {"bytes_written", bytes_written},
                                        {"files_written", files_written},
                                        {"keep_busy", keep_busy}});
}

void VmgrClient::release(const std::string& vid) { rpc_.call("vmgr.release", {{"vid", vid}}); }

std::vector<DrivePlantModel> VmgrClient::plant_models() {
  return rpc_.call("vmgr.plant").at("models").get<std::vector<DrivePlantModel>>();
}

std::vector<DriveSpec> VmgrClient::plant_drives() {
  return rpc_.call("vmgr.plant").at("drives").get<std::vector<DriveSpec>>();
}

}  // namespace castor::vmgr
