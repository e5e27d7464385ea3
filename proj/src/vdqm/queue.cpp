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

#include "castor/vdqm/queue.hpp"

namespace castor::vdqm {

std::string_view state_name(DriveState s) {
  switch (s) {
    case DriveState::kUpFree: return "UP_FREE";
    case DriveState::kUpBusy: return "UP_BUSY";
    case DriveState::kDown: return "DOWN";
  }
  return "?";
}

DriveState parse_state(std::string_view s) {
  if (s == "UP_FREE") return DriveState::kUpFree;
  if (s == "UP_BUSY") return DriveState::kUpBusy;
  if (s == "DOWN") return DriveState::kDown;
  raise(Errc::kInvalidArgument, "unknown drive state '" + std::string(s) + "'");
}

std::string_view access_name(Access a) { return a == Access::kRead ? "READ" : "WRITE"; }

Access parse_access(std::string_view s) {
  if (s == "READ") return Access::kRead;
  if (s == "WRITE") return Access::kWrite;
  raise(Errc::kInvalidArgument, "unknown access '" + std::string(s) + "'");
}

Queue::Queue(QueueOptions options) : options_(std::move(options)) {}

DriveRecord& Queue::drive(const std::string& name) {
  auto it = drives_.find(name);
  if (it == drives_.end()) raise(Errc::kNotFound, "no drive " + name);
  return it->second;
}

bool Queue::compatible(const DriveRecord& d, const VolumeRequest& r) const {
  if (d.model == r.model) return true;
  if (r.access == Access::kWrite) return false;
  auto it = options_.reads.find(d.model);
  return it != options_.reads.end() && it->second.count(r.model) != 0;
}

void Queue::dispatch() {
  size_t free = 0;
  for (const auto& [name, d] : drives_) free += d.state == DriveState::kUpFree;
  bool assigned = false;
  for (auto& [seq, r] : requests_) {
    if (free == 0) break;
    if (!r.assigned_drive.empty()) continue;
    DriveRecord* pick = nullptr;
    for (auto& [name, d] : drives_) {
      if (d.state != DriveState::kUpFree || !compatible(d, r)) continue;
      if (pick == nullptr) pick = &d;
      if (d.last_vid == r.vid) {
        pick = &d;
        break;
      }
    }
    if (pick == nullptr) continue;
    pick->state = DriveState::kUpBusy;
    pick->mounted_vid = r.vid;
    pick->assigned_req = r.req_id;
    r.assigned_drive = pick->drive_name;
    r.assign_seq = next_assign_++;
    --free;
    assigned = true;
  }
  if (assigned) cv_.notify_all();
}

void Queue::register_drive(DriveRecord d) {
  if (d.drive_name.empty() || d.model.empty()) raise(Errc::kInvalidArgument, "drive needs a name and a model");
  if (d.state == DriveState::kUpBusy) raise(Errc::kIllegalTransition, "a drive cannot register busy");
  std::lock_guard lock(mu_);
  if (drives_.count(d.drive_name)) raise(Errc::kExists, "drive " + d.drive_name);
  d.mounted_vid.clear();
  d.assigned_req = 0;
  drives_[d.drive_name] = d;
  dispatch();
}

void Queue::set_drive_state(const std::string& name, DriveState state) {
  std::lock_guard lock(mu_);
  DriveRecord& d = drive(name);
  if (d.state == state) return;
  if (state == DriveState::kUpBusy || d.state == DriveState::kUpBusy) {
    raise(Errc::kIllegalTransition, name + ": " + std::string(state_name(d.state)) + " -> " +
                                        std::string(state_name(state)));
  }
  d.state = state;
  dispatch();
}

uint64_t Queue::submit_request(const std::string& vid, Access access, const std::string& model,
                               const std::string& client_addr) {
  if (vid.empty()) raise(Errc::kInvalidArgument, "request needs a vid");
  std::lock_guard lock(mu_);
  bool known = options_.models.count(model) != 0;
  for (const auto& [name, d] : drives_) {
    auto reads = options_.reads.find(d.model);
    known = known || d.model == model || (reads != options_.reads.end() && reads->second.count(model) != 0);
  }
  if (!known) raise(Errc::kUnknownModel, "no drive model '" + model + "'");
  VolumeRequest r;
  r.submit_seq = next_seq_++;
  r.req_id = r.submit_seq;
  r.vid = vid;
  r.access = access;
  r.model = model;
  r.client_addr = client_addr;
  requests_[r.submit_seq] = r;
  by_id_[r.req_id] = r.submit_seq;
  dispatch();
  return r.req_id;
}

void Queue::drop(std::map<uint64_t, VolumeRequest>::iterator it) {
  const VolumeRequest& r = it->second;
  if (!r.assigned_drive.empty()) {
    DriveRecord& d = drives_.at(r.assigned_drive);
    d.state = DriveState::kUpFree;
    d.last_vid = d.mounted_vid;
    d.mounted_vid.clear();
    d.assigned_req = 0;
  }
  by_id_.erase(r.req_id);
  requests_.erase(it);
}

void Queue::release_drive(const std::string& name, uint64_t req_id) {
  std::lock_guard lock(mu_);
  auto d = drives_.find(name);
  if (d == drives_.end() || d->second.state != DriveState::kUpBusy || d->second.assigned_req != req_id) {
    raise(Errc::kNotAssigned, "request " + std::to_string(req_id) + " does not hold drive " + name);
  }
  drop(requests_.find(by_id_.at(req_id)));
  dispatch();
}

void Queue::cancel(uint64_t req_id) {
  std::lock_guard lock(mu_);
  auto it = by_id_.find(req_id);
  if (it == by_id_.end()) raise(Errc::kNotFound, "no request " + std::to_string(req_id));
  drop(requests_.find(it->second));
  dispatch();
  cv_.notify_all();
}

size_t Queue::cancel_client(const std::string& client_addr) {
  std::lock_guard lock(mu_);
  size_t n = 0;
  for (auto it = requests_.begin(); it != requests_.end();) {
    auto next = std::next(it);
    if (it->second.client_addr == client_addr) {
      drop(it);
      ++n;
    }
    it = next;
  }
  dispatch();
  cv_.notify_all();
  return n;
}

Snapshot Queue::queue_snapshot() const {
  std::lock_guard lock(mu_);
  Snapshot s;
  for (const auto& [seq, r] : requests_) s.requests.push_back(r);
  for (const auto& [name, d] : drives_) s.drives.push_back(d);
  return s;
}

std::optional<std::string> Queue::assignment(uint64_t req_id) const {
  std::lock_guard lock(mu_);
  auto it = by_id_.find(req_id);
  if (it == by_id_.end()) raise(Errc::kNotFound, "no request " + std::to_string(req_id));
  const VolumeRequest& r = requests_.at(it->second);
  if (r.assigned_drive.empty()) return std::nullopt;
  return r.assigned_drive;
}

std::optional<std::string> Queue::wait(uint64_t req_id, std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    auto it = by_id_.find(req_id);
    if (it == by_id_.end()) raise(Errc::kNotFound, "no request " + std::to_string(req_id));
    const VolumeRequest& r = requests_.at(it->second);
    if (!r.assigned_drive.empty()) return r.assigned_drive;
    if (cv_.wait_until(lock, deadline) == std::cv_status::timeout) {
      auto again = by_id_.find(req_id);
      if (again == by_id_.end()) raise(Errc::kNotFound, "no request " + std::to_string(req_id));
      const VolumeRequest& last = requests_.at(again->second);
      if (last.assigned_drive.empty()) return std::nullopt;
      return last.assigned_drive;
    }
  }
}

void to_json(Json& j, const DriveRecord& d) {
  j = Json{{"drive_name", d.drive_name}, {"server_name", d.server_name},   {"model", d.model},
           {"state", state_name(d.state)}, {"mounted_vid", d.mounted_vid}, {"last_vid", d.last_vid},
           {"assigned_req", d.assigned_req}};
}

void from_json(const Json& j, DriveRecord& d) {
  d.drive_name = j.at("drive_name").get<std::string>();
  d.server_name = j.value("server_name", std::string());
  d.model = j.at("model").get<std::string>();
  d.state = parse_state(j.value("state", std::string("DOWN")));
  d.mounted_vid = j.value("mounted_vid", std::string());
  d.last_vid = j.value("last_vid", std::string());
  d.assigned_req = j.value("assigned_req", uint64_t{0});
}

void to_json(Json& j, const VolumeRequest& r) {
  j = Json{{"req_id", r.req_id},
           {"vid", r.vid},
           {"access", access_name(r.access)},
           {"model", r.model},
           {"client_addr", r.client_addr},
           {"submit_seq", r.submit_seq},
           {"assigned_drive", r.assigned_drive},
           {"assign_seq", r.assign_seq}};
}

void from_json(const Json& j, VolumeRequest& r) {
  r.req_id = j.at("req_id").get<uint64_t>();
  r.vid = j.at("vid").get<std::string>();
  r.access = parse_access(j.at("access").get<std::string>());
  r.model = j.at("model").get<std::string>();
  r.client_addr = j.value("client_addr", std::string());
  r.submit_seq = j.at("submit_seq").get<uint64_t>();
  r.assigned_drive = j.value("assigned_drive", std::string());
  r.assign_seq = j.value("assign_seq", uint64_t{0});
}

void to_json(Json& j, const Snapshot& s) { j = Json{{"requests", s.requests}, {"drives", s.drives}}; }

void from_json(const Json& j, Snapshot& s) {
  s.requests = j.at("requests").get<std::vector<VolumeRequest>>();
  s.drives = j.at("drives").get<std::vector<DriveRecord>>();
}

}  // namespace castor::vdqm
