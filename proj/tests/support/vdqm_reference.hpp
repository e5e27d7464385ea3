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

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "castor/vdqm/queue.hpp"

namespace castor::test {

// Reference discipline, written independently of Queue: repeatedly give the
// oldest waiting request that has any free compatible drive its preferred
// drive.
struct RefDrive {
  std::string model;
  bool up = false;
  uint64_t holder = 0;
  std::string last_vid;
};
struct RefReq {
  uint64_t id;
  std::string vid;
  vdqm::Access access;
  std::string model;
  std::string drive;
};
struct RefSim {
  std::map<std::string, std::set<std::string>> reads;
  std::map<std::string, RefDrive> drives;
  std::vector<RefReq> reqs;
  bool fits(const RefDrive& d, const RefReq& r) const {
    if (d.model == r.model) return true;
    return r.access == vdqm::Access::kRead && reads.count(d.model) && reads.at(d.model).count(r.model);
  }
  void run() {
    for (bool progress = true; progress;) {
      progress = false;
      for (auto& r : reqs) {
        if (!r.drive.empty()) continue;
        std::string pick;
        for (auto& [name, d] : drives) {
          if (!d.up || d.holder || !fits(d, r)) continue;
          if (pick.empty() || (d.last_vid == r.vid && drives[pick].last_vid != r.vid)) pick = name;
        }
        if (pick.empty()) continue;
        drives[pick].holder = r.id;
        r.drive = pick;
        progress = true;
        break;
      }
    }
  }
  void release(const std::string& name) {
    auto& d = drives[name];
    for (auto it = reqs.begin(); it != reqs.end(); ++it) {
      if (it->id == d.holder) {
        d.last_vid = it->vid;
        reqs.erase(it);
        break;
      }
    }
    d.holder = 0;
    run();
  }
};

// One randomized trial: drives of three models go up and down, requests are
// submitted and drives released in random order. After every step the queue
// must equal the reference, and no request may ever have been passed over by
// a later one for a drive it could use. Returns "" or the first mismatch.
inline std::string run_fifo_trial(uint64_t seed, int steps = 300) {
  using namespace vdqm;
  std::mt19937_64 rng(seed);
  const std::map<std::string, std::set<std::string>> reads{{"9940B", {"9940A"}}};
  QueueOptions options{.reads = reads, .models = {"9940A", "9940B", "LTO"}};
  Queue q(options);
  RefSim ref{.reads = reads};
  const std::vector<std::string> models{"9940A", "9940B", "LTO"};
  const int n_drives = 2 + static_cast<int>(rng() % 5);
  for (int i = 0; i < n_drives; ++i) {
    const std::string name = "d" + std::to_string(i);
    const std::string& m = models[rng() % models.size()];
    q.register_drive(DriveRecord{.drive_name = name, .server_name = "srv" + name, .model = m, .state = DriveState::kDown});
    ref.drives[name].model = m;
  }
  struct Seen {
    uint64_t submit = 0;
    uint64_t assign = 0;
    std::string drive_model;
    RefReq req;
  };
  std::map<uint64_t, Seen> seen;
  for (int step = 0; step < steps; ++step) {
    const int kind = static_cast<int>(rng() % 3);
    if (kind == 0) {
      const std::string& m = models[rng() % models.size()];
      const std::string vid = m.substr(0, 1) + "0000" + std::to_string(rng() % 4);
      const Access a = rng() % 2 ? Access::kRead : Access::kWrite;
      const uint64_t id = q.submit_request(vid, a, m);
      ref.reqs.push_back({id, vid, a, m, ""});
      ref.run();
    } else {
      const std::string name = "d" + std::to_string(rng() % n_drives);
      for (const auto& d : q.queue_snapshot().drives) {
        if (d.drive_name != name) continue;
        if (d.state == DriveState::kUpBusy) {
          q.release_drive(name, d.assigned_req);
          ref.release(name);
        } else {
          const bool up = kind == 1;
          q.set_drive_state(name, up ? DriveState::kUpFree : DriveState::kDown);
          ref.drives[name].up = up;
          ref.run();
        }
      }
    }
    const Snapshot s = q.queue_snapshot();
    if (s.requests.size() != ref.reqs.size()) return "step " + std::to_string(step) + ": queue length differs";
    for (size_t i = 0; i < s.requests.size(); ++i) {
      const auto& r = s.requests[i];
      if (r.req_id != ref.reqs[i].id || r.assigned_drive != ref.reqs[i].drive) {
        return "step " + std::to_string(step) + ": request " + std::to_string(r.req_id) + " got '" + r.assigned_drive +
               "', reference '" + ref.reqs[i].drive + "'";
      }
      auto& e = seen[r.req_id];
      e.submit = r.submit_seq;
      e.req = ref.reqs[i];
      if (r.assign_seq != 0 && e.assign == 0) {
        e.assign = r.assign_seq;
        e.drive_model = ref.drives[r.assigned_drive].model;
      }
    }
  }
  // Submission order restricted to compatible pairs.
  for (const auto& [ia, a] : seen) {
    for (const auto& [ib, b] : seen) {
      if (a.submit >= b.submit || b.assign == 0) continue;
      if (a.assign != 0 && a.assign < b.assign) continue;
      RefDrive d{.model = b.drive_model};
      if (ref.fits(d, a.req)) return "request " + std::to_string(ib) + " overtook " + std::to_string(ia);
    }
  }
  return "";
}

}  // namespace castor::test
