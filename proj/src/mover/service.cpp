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

#include "castor/mover/service.hpp"

#include "castor/common/error.hpp"

namespace castor::mover {

Mover::Mover(MoverOptions options) : options_(std::move(options)), store_(options_.tape_root, options_.sync) {
  if (!options_.disk) options_.disk = std::make_shared<LocalDiskAccess>();
}

SimulatedDrive& Mover::add_drive(const std::string& name, const std::string& model, const DriveTiming& timing) {
  if (drives_.count(name)) raise(Errc::kExists, "drive " + name + " already exists");
  auto d = std::make_unique<SimulatedDrive>(name, model, timing, store_, *options_.disk);
  auto& ref = *d;
  drives_.emplace(name, std::move(d));
  return ref;
}

SimulatedDrive& Mover::drive(const std::string& name) {
  auto it = drives_.find(name);
  if (it == drives_.end()) raise(Errc::kNotFound, "no drive " + name);
  return *it->second;
}

std::vector<DriveInfo> Mover::drives() const {
  std::vector<DriveInfo> out;
  for (const auto& [name, d] : drives_) {
    out.push_back(DriveInfo{name, d->model(), d->mounted_vid(), d->head(), d->clock_us()});
  }
  return out;
}

Dispatcher make_dispatcher(Mover& mover) {
  Dispatcher d;
  d.add("mover.ping", [](const Json&) { return Json("pong"); });
  d.add("mover.run_job", [&mover](const Json& a) {
    return Json(mover.drive(arg<std::string>(a, "drive")).run_job(arg<TransferJob>(a, "job")));
  });
  d.add("mover.mount", [&mover](const Json& a) {
    mover.drive(arg<std::string>(a, "drive")).mount(arg<std::string>(a, "vid"));
    return Json();
  });
  d.add("mover.unmount", [&mover](const Json& a) {
    mover.drive(arg<std::string>(a, "drive")).unmount();
    return Json();
  });
  d.add("mover.sync_clock", [&mover](const Json& a) {
    auto& drive = mover.drive(arg<std::string>(a, "drive"));
    drive.sync_clock(arg<int64_t>(a, "t_us"));
    return Json(drive.clock_us());
  });
  d.add("mover.drives", [&mover](const Json&) { return Json(mover.drives()); });
  d.add("mover.tape_files", [&mover](const Json& a) { return Json(mover.store().files(arg<std::string>(a, "vid"))); });
  d.add("mover.discard", [&mover](const Json& a) {
    mover.store().discard(arg<std::string>(a, "vid"));
    return Json();
  });
  return d;
}

TransferReport MoverClient::run_job(const std::string& drive, const TransferJob& job) {
  return rpc_.call("mover.run_job", {{"drive", drive}, {"job", job}}).get<TransferReport>();
}

void MoverClient::mount(const std::string& drive, const std::string& vid) {
  rpc_.call("mover.mount", {{"drive", drive}, {"vid", vid}});
}

void MoverClient::unmount(const std::string& drive) { rpc_.call("mover.unmount", {{"drive", drive}}); }

void MoverClient::sync_clock(const std::string& drive, int64_t t_us) {
  rpc_.call("mover.sync_clock", {{"drive", drive}, {"t_us", t_us}});
}

std::vector<DriveInfo> MoverClient::drives() { return rpc_.call("mover.drives", Json::object()).get<std::vector<DriveInfo>>(); }

std::vector<TapeFileInfo> MoverClient::tape_files(const std::string& vid) {
  return rpc_.call("mover.tape_files", {{"vid", vid}}).get<std::vector<TapeFileInfo>>();
}

void MoverClient::discard(const std::string& vid) { rpc_.call("mover.discard", {{"vid", vid}}); }

void to_json(Json& j, const DriveInfo& d) {
  j = Json{{"name", d.name}, {"model", d.model}, {"head", d.head}, {"clock_us", d.clock_us}};
  j["mounted_vid"] = d.mounted_vid ? Json(*d.mounted_vid) : Json();
}

void from_json(const Json& j, DriveInfo& d) {
  d.name = j.at("name").get<std::string>();
  d.model = j.at("model").get<std::string>();
  d.head = j.at("head").get<uint32_t>();
  d.clock_us = j.at("clock_us").get<int64_t>();
  d.mounted_vid.reset();
  if (!j.at("mounted_vid").is_null()) d.mounted_vid = j["mounted_vid"].get<std::string>();
}

void to_json(Json& j, const TapeFileInfo& f) { j = Json{{"fseq", f.fseq}, {"size", f.size}, {"crc32", f.crc32}}; }

void from_json(const Json& j, TapeFileInfo& f) {
  f.fseq = j.at("fseq").get<uint32_t>();
  f.size = j.at("size").get<uint64_t>();
  f.crc32 = j.at("crc32").get<uint32_t>();
}

}  // namespace castor::mover
