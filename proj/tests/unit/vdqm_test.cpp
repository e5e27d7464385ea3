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

#include <gtest/gtest.h>

#include <chrono>
#include <random>
#include <thread>

#include "castor/vdqm/service.hpp"
#include "support/vdqm_reference.hpp"

namespace castor::vdqm {
namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const CastorError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return Errc::kInternal;
}

QueueOptions cern_options() { return QueueOptions{.reads = {{"9940B", {"9940A"}}}}; }

DriveRecord drive(const std::string& name, const std::string& model, DriveState state = DriveState::kUpFree) {
  return DriveRecord{.drive_name = name, .server_name = "srv-" + name, .model = model, .state = state};
}

TEST(VdqmTest, ImmediateAssignmentAndQueueing) {
  Queue q(cern_options());
  q.register_drive(drive("d1", "9940B"));
  const uint64_t r1 = q.submit_request("B00001", Access::kWrite, "9940B");
  EXPECT_EQ(q.assignment(r1), "d1");
  const uint64_t r2 = q.submit_request("B00002", Access::kWrite, "9940B");
  EXPECT_EQ(q.assignment(r2), std::nullopt);
  const Snapshot s = q.queue_snapshot();
  ASSERT_EQ(s.requests.size(), 2u);
  EXPECT_EQ(s.drives.at(0).mounted_vid, "B00001");
  q.release_drive("d1", r1);
  EXPECT_EQ(q.assignment(r2), "d1");
  EXPECT_EQ(q.queue_snapshot().requests.size(), 1u);
  EXPECT_EQ(code_of([&] { q.assignment(r1); }), Errc::kNotFound);
}

TEST(VdqmTest, AllDrivesDownQueuesUntilUp) {
  Queue q(cern_options());
  q.register_drive(drive("d1", "9940B", DriveState::kDown));
  q.register_drive(drive("d2", "9940B", DriveState::kDown));
  EXPECT_TRUE(q.queue_snapshot().requests.empty());
  const uint64_t a = q.submit_request("B00001", Access::kWrite, "9940B");
  const uint64_t b = q.submit_request("B00002", Access::kWrite, "9940B");
  const uint64_t c = q.submit_request("B00003", Access::kWrite, "9940B");
  const Snapshot s = q.queue_snapshot();
  ASSERT_EQ(s.requests.size(), 3u);
  EXPECT_EQ(s.requests[0].req_id, a);
  EXPECT_EQ(s.requests[2].req_id, c);
  q.set_drive_state("d2", DriveState::kUpFree);
  EXPECT_EQ(q.assignment(a), "d2");
  EXPECT_EQ(q.assignment(b), std::nullopt);
}

TEST(VdqmTest, TransitionsAndErrors) {
  Queue q(cern_options());
  q.register_drive(drive("d1", "9940B", DriveState::kDown));
  EXPECT_EQ(code_of([&] { q.set_drive_state("d1", DriveState::kUpBusy); }), Errc::kIllegalTransition);
  EXPECT_EQ(code_of([&] { q.set_drive_state("dx", DriveState::kUpFree); }), Errc::kNotFound);
  EXPECT_EQ(code_of([&] { q.register_drive(drive("d1", "9940B")); }), Errc::kExists);
  q.set_drive_state("d1", DriveState::kUpFree);
  q.set_drive_state("d1", DriveState::kUpFree);
  const uint64_t r = q.submit_request("B00001", Access::kWrite, "9940B");
  EXPECT_EQ(code_of([&] { q.set_drive_state("d1", DriveState::kUpFree); }), Errc::kIllegalTransition);
  EXPECT_EQ(code_of([&] { q.set_drive_state("d1", DriveState::kDown); }), Errc::kIllegalTransition);
  EXPECT_EQ(code_of([&] { q.release_drive("d1", r + 100); }), Errc::kNotAssigned);
  EXPECT_EQ(code_of([&] { q.release_drive("nodrive", r); }), Errc::kNotAssigned);
  EXPECT_EQ(code_of([&] { q.submit_request("X00001", Access::kRead, "3480"); }), Errc::kUnknownModel);
  q.release_drive("d1", r);
  EXPECT_EQ(code_of([&] { q.release_drive("d1", r); }), Errc::kNotAssigned);
  const DriveRecord d = q.queue_snapshot().drives.at(0);
  EXPECT_EQ(d.state, DriveState::kUpFree);
  EXPECT_TRUE(d.mounted_vid.empty());
  EXPECT_EQ(d.last_vid, "B00001");
}

TEST(VdqmTest, ReadCompatibilityTable) {
  Queue q(cern_options());
  q.register_drive(drive("b1", "9940B"));
  const uint64_t w = q.submit_request("A00001", Access::kWrite, "9940A", "");
  EXPECT_EQ(q.assignment(w), std::nullopt);  // writes need an exact match
  const uint64_t r = q.submit_request("A00002", Access::kRead, "9940A");
  EXPECT_EQ(q.assignment(r), "b1");
  q.register_drive(drive("a1", "9940A"));
  EXPECT_EQ(q.assignment(w), "a1");
  Queue strict;
  strict.register_drive(drive("b1", "9940B"));
  strict.register_drive(drive("a1", "9940A", DriveState::kDown));
  const uint64_t r2 = strict.submit_request("A00002", Access::kRead, "9940A");
  EXPECT_EQ(strict.assignment(r2), std::nullopt);
}

TEST(VdqmTest, PrefersDriveThatLastHeldTheVolume) {
  Queue q;
  q.register_drive(drive("d1", "LTO"));
  q.register_drive(drive("d2", "LTO"));
  const uint64_t a = q.submit_request("L00009", Access::kRead, "LTO");
  const uint64_t b = q.submit_request("L00005", Access::kRead, "LTO");
  EXPECT_EQ(q.assignment(a), "d1");
  EXPECT_EQ(q.assignment(b), "d2");
  q.release_drive("d1", a);
  q.release_drive("d2", b);
  const uint64_t c = q.submit_request("L00005", Access::kRead, "LTO");
  EXPECT_EQ(q.assignment(c), "d2");
}

TEST(VdqmTest, CancelClientFreesItsDrives) {
  Queue q;
  q.register_drive(drive("d1", "LTO"));
  const uint64_t a = q.submit_request("L00001", Access::kRead, "LTO", "stager-1");
  q.submit_request("L00002", Access::kRead, "LTO", "stager-1");
  const uint64_t c = q.submit_request("L00003", Access::kRead, "LTO", "stager-2");
  EXPECT_EQ(q.assignment(a), "d1");
  EXPECT_EQ(q.cancel_client("stager-1"), 2u);
  EXPECT_EQ(q.assignment(c), "d1");
  q.cancel(c);
  EXPECT_TRUE(q.queue_snapshot().requests.empty());
  EXPECT_EQ(q.queue_snapshot().drives[0].state, DriveState::kUpFree);
}

TEST(VdqmTest, WaitWakesOnAssignment) {
  Queue q;
  q.register_drive(drive("d1", "LTO"));
  const uint64_t a = q.submit_request("L00001", Access::kRead, "LTO");
  const uint64_t b = q.submit_request("L00002", Access::kRead, "LTO");
  EXPECT_EQ(q.wait(b, std::chrono::milliseconds(20)), std::nullopt);
  std::thread t([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(30));
    q.release_drive("d1", a);
  });
  EXPECT_EQ(q.wait(b, std::chrono::seconds(5)), "d1");
  t.join();
}

using test::RefDrive;
using test::RefReq;
using test::RefSim;

void expect_same(const Queue& q, const RefSim& ref) {
  const Snapshot s = q.queue_snapshot();
  ASSERT_EQ(s.requests.size(), ref.reqs.size());
  for (size_t i = 0; i < s.requests.size(); ++i) {
    ASSERT_EQ(s.requests[i].req_id, ref.reqs[i].id);
    ASSERT_EQ(s.requests[i].assigned_drive, ref.reqs[i].drive) << "request " << s.requests[i].req_id;
  }
}

// Properties that together rule out starvation: no waiting request sits next
// to a free compatible drive, and no request ever holds a drive that an older
// waiting request could have used.
void check_invariants(const Queue& q) {
  const Snapshot s = q.queue_snapshot();
  std::map<std::string, DriveRecord> drives;
  for (const auto& d : s.drives) drives[d.drive_name] = d;
  for (size_t i = 0; i < s.requests.size(); ++i) {
    const VolumeRequest& r = s.requests[i];
    if (i > 0) ASSERT_LT(s.requests[i - 1].submit_seq, r.submit_seq);
    if (!r.assigned_drive.empty()) {
      const DriveRecord& d = drives.at(r.assigned_drive);
      ASSERT_EQ(d.state, DriveState::kUpBusy);
      ASSERT_EQ(d.assigned_req, r.req_id);
      ASSERT_EQ(d.mounted_vid, r.vid);
      ASSERT_TRUE(q.compatible(d, r));
      for (size_t k = 0; k < i; ++k) {
        if (s.requests[k].assigned_drive.empty()) ASSERT_FALSE(q.compatible(d, s.requests[k])) << "bypass";
      }
      continue;
    }
    for (const auto& [name, d] : drives) {
      ASSERT_FALSE(d.state == DriveState::kUpFree && q.compatible(d, r)) << "idle drive " << name << " fits " << r.req_id;
    }
  }
  for (const auto& [name, d] : drives) {
    if (d.state != DriveState::kUpBusy) ASSERT_TRUE(d.mounted_vid.empty());
  }
}

struct Submit {
  std::string vid;
  Access access;
  std::string model;
};

TEST(VdqmModelCheck, ExhaustiveInterleavingsToDepthEight) {
  const std::vector<Submit> submits{
      {"A00001", Access::kRead, "9940A"}, {"B00001", Access::kWrite, "9940B"}, {"A00002", Access::kRead, "9940A"}};
  const std::vector<std::pair<std::string, std::string>> plant{{"da", "9940A"}, {"db", "9940B"}};
  // Event codes: 0..2 submit, 3..4 act on drive (release if busy, else toggle up/down).
  size_t leaves = 0;
  std::vector<int> path;
  std::function<void()> explore = [&] {
    Queue q(cern_options());
    RefSim ref{.reads = cern_options().reads};
    for (const auto& [name, model] : plant) {
      q.register_drive(drive(name, model, DriveState::kDown));
      ref.drives[name].model = model;
    }
    for (int ev : path) {
      if (ev < 3) {
        const uint64_t id = q.submit_request(submits[ev].vid, submits[ev].access, submits[ev].model);
        ref.reqs.push_back({id, submits[ev].vid, submits[ev].access, submits[ev].model, ""});
        ref.run();
      } else {
        const std::string& name = plant[ev - 3].first;
        const Snapshot s = q.queue_snapshot();
        const DriveRecord& d = name == s.drives[0].drive_name ? s.drives[0] : s.drives[1];
        if (d.state == DriveState::kUpBusy) {
          q.release_drive(name, d.assigned_req);
          ref.release(name);
        } else {
          const bool up = d.state == DriveState::kDown;
          q.set_drive_state(name, up ? DriveState::kUpFree : DriveState::kDown);
          ref.drives[name].up = up;
          ref.run();
        }
      }
    }
    check_invariants(q);
    expect_same(q, ref);
    if (::testing::Test::HasFatalFailure()) return;
    if (path.size() == 8) {
      ++leaves;
      return;
    }
    for (int ev = 0; ev < 5; ++ev) {
      path.push_back(ev);
      explore();
      path.pop_back();
      if (::testing::Test::HasFatalFailure()) return;
    }
  };
  explore();
  EXPECT_EQ(leaves, 390625u);
}

TEST(VdqmModelCheck, RandomInterleavingsMatchReference) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 50; ++round) {
    QueueOptions options = cern_options();
    options.models = {"9940A", "9940B", "LTO"};
    Queue q(options);
    RefSim ref{.reads = cern_options().reads};
    const std::vector<std::string> models{"9940A", "9940B", "LTO"};
    for (int i = 0; i < 6; ++i) {
      const std::string name = "d" + std::to_string(i);
      const std::string& m = models[rng() % models.size()];
      q.register_drive(drive(name, m, DriveState::kDown));
      ref.drives[name].model = m;
    }
    std::map<uint64_t, std::pair<uint64_t, std::string>> assigned;  // req -> (assign_seq, model)
    for (int step = 0; step < 300; ++step) {
      const int kind = static_cast<int>(rng() % 3);
      if (kind == 0) {
        const std::string& m = models[rng() % models.size()];
        const std::string vid = m.substr(0, 1) + "0000" + std::to_string(rng() % 4);
        const Access a = rng() % 2 ? Access::kRead : Access::kWrite;
        const uint64_t id = q.submit_request(vid, a, m);
        ref.reqs.push_back({id, vid, a, m, ""});
        ref.run();
      } else {
        const std::string name = "d" + std::to_string(rng() % 6);
        const Snapshot s = q.queue_snapshot();
        for (const auto& d : s.drives) {
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
      expect_same(q, ref);
      check_invariants(q);
      if (HasFatalFailure()) return;
      for (const auto& r : q.queue_snapshot().requests) {
        if (r.assign_seq) assigned[r.req_id] = {r.assign_seq, ref.drives[r.assigned_drive].model};
      }
    }
    // FIFO per drive model: submit order implies assignment order.
    for (auto a = assigned.begin(); a != assigned.end(); ++a) {
      for (auto b = std::next(a); b != assigned.end(); ++b) {
        if (a->second.second == b->second.second) ASSERT_LT(a->second.first, b->second.first);
      }
    }
  }
}

TEST(VdqmModelCheck, FifoTrialsAgreeWithReference) {
  for (uint64_t seed = 1; seed <= 100; ++seed) ASSERT_EQ(test::run_fifo_trial(seed), "") << "seed " << seed;
}

TEST(VdqmPerfTest, TenThousandCyclesUnderFiveSeconds) {
  Queue q;
  for (int i = 0; i < 10; ++i) q.register_drive(drive("d" + std::to_string(i), "LTO"));
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 10000; ++i) {
    const uint64_t r = q.submit_request("L" + std::to_string(10000 + i % 50000).substr(0, 5), Access::kRead, "LTO");
    const auto d = q.assignment(r);
    ASSERT_TRUE(d.has_value());
    q.release_drive(*d, r);
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(s, 5.0);
}

TEST(VdqmConcurrencyTest, SnapshotsUnderChurnAreConsistent) {
  Queue q;
  for (int i = 0; i < 4; ++i) q.register_drive(drive("d" + std::to_string(i), "LTO"));
  std::atomic<bool> stop{false};
  std::vector<std::thread> workers;
  for (int t = 0; t < 3; ++t) {
    workers.emplace_back([&, t] {
      std::mt19937 rng(t);
      while (!stop) {
        const uint64_t r = q.submit_request("L0000" + std::to_string(rng() % 5), Access::kRead, "LTO");
        if (auto d = q.wait(r, std::chrono::seconds(2))) {
          q.release_drive(*d, r);
        } else {
          q.cancel(r);
        }
      }
    });
  }
  for (int i = 0; i < 1000; ++i) {
    check_invariants(q);
    if (HasFatalFailure()) break;
  }
  stop = true;
  for (auto& w : workers) w.join();
}

TEST(VdqmServiceTest, WireRoundTrip) {
  Queue q(cern_options());
  Dispatcher d = make_dispatcher(q);
  auto connector = std::make_shared<Connector>();
  connector->register_loopback("vdqm", &d);
  VdqmClient c(connector->connect("loop://vdqm"));
  c.register_drive(drive("b1", "9940B", DriveState::kDown));
  const uint64_t r = c.submit_request("A00001", Access::kRead, "9940A", "me");
  EXPECT_EQ(c.assignment(r), std::nullopt);
  c.set_drive_state("b1", DriveState::kUpFree);
  EXPECT_EQ(c.wait(r, std::chrono::milliseconds(10)), "b1");
  const Snapshot s = c.queue_snapshot();
  EXPECT_EQ(s.requests.at(0).access, Access::kRead);
  EXPECT_EQ(s.drives.at(0).state, DriveState::kUpBusy);
  c.release_drive("b1", r);
  EXPECT_EQ(c.cancel_client("me"), 0u);
  try {
    c.release_drive("b1", r);
    ADD_FAILURE();
  } catch (const CastorError& e) {
    EXPECT_EQ(e.code(), Errc::kNotAssigned);
  }
}

}  // namespace
}  // namespace castor::vdqm
