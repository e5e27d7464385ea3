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

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "castor/common/rpc.hpp"

namespace castor::vdqm {

enum class DriveState { kUpFree, kUpBusy, kDown };
enum class Access { kRead, kWrite };

std::string_view state_name(DriveState s);
DriveState parse_state(std::string_view s);
std::string_view access_name(Access a);
Access parse_access(std::string_view s);

struct DriveRecord {
  std::string drive_name;
  std::string server_name;
  std::string model;
  DriveState state = DriveState::kDown;
  std::string mounted_vid;  // set only while UP_BUSY
  std::string last_vid;     // volume of the last finished assignment
  uint64_t assigned_req = 0;

  bool operator==(const DriveRecord&) const = default;
};

struct VolumeRequest {
  uint64_t req_id = 0;
  std::string vid;
  Access access = Access::kRead;
  std::string model;  // media model of the volume
  std::string client_addr;
  uint64_t submit_seq = 0;
  std::string assigned_drive;
  uint64_t assign_seq = 0;  // 0 until assigned; increases with every assignment

  bool operator==(const VolumeRequest&) const = default;
};

struct Snapshot {
  std::vector<VolumeRequest> requests;  // submit_seq order
  std::vector<DriveRecord> drives;      // name order
};

struct QueueOptions {
  // drive model -> media models it reads besides its own
  std::map<std::string, std::set<std::string>> reads;
  // Media models accepted on submit in addition to those of registered drives.
  std::set<std::string> models;
};

// Drive registry and strict FIFO matchmaker. Every event runs the dispatcher:
// requests are scanned in submit order and each takes a free compatible drive
// if one exists. Among free compatible drives the one that last held the
// requested volume is preferred, else the smallest name.
class Queue {
 public:
  explicit Queue(QueueOptions options = {});

  void register_drive(DriveRecord drive);
  void set_drive_state(const std::string& drive, DriveState state);
  uint64_t submit_request(const std::string& vid, Access access, const std::string& model,
                          const std::string& client_addr = "");
  void release_drive(const std::string& drive, uint64_t req_id);
  // Drops a request; an assigned one also frees its drive.
  void cancel(uint64_t req_id);
  // Drops every request of one client; returns how many.
  size_t cancel_client(const std::string& client_addr);

  Snapshot queue_snapshot() const;
  std::optional<std::string> assignment(uint64_t req_id) const;
  // Blocks until the request is assigned or the timeout passes.
  std::optional<std::string> wait(uint64_t req_id, std::chrono::milliseconds timeout);

  bool compatible(const DriveRecord& drive, const VolumeRequest& req) const;

 private:
  void dispatch();
  void drop(std::map<uint64_t, VolumeRequest>::iterator it);
  DriveRecord& drive(const std::string& name);

  QueueOptions options_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::map<std::string, DriveRecord> drives_;
  std::map<uint64_t, VolumeRequest> requests_;  // keyed by submit_seq
  std::map<uint64_t, uint64_t> by_id_;          // req_id -> submit_seq
  uint64_t next_seq_ = 1;
  uint64_t next_assign_ = 1;
};

void to_json(Json& j, const DriveRecord& d);
void from_json(const Json& j, DriveRecord& d);
void to_json(Json& j, const VolumeRequest& r);
void from_json(const Json& j, VolumeRequest& r);
void to_json(Json& j, const Snapshot& s);
void from_json(const Json& j, Snapshot& s);

}  // namespace castor::vdqm
