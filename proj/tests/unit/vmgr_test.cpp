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

#include "castor/vmgr/service.hpp"
#include "support/temp_dir.hpp"

namespace castor::vmgr {
namespace {

constexpr uint64_t kGB = 1000ull * 1000 * 1000;

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const CastorError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return Errc::kInternal;
}

TapeVolume vol(const std::string& vid, const std::string& pool, uint64_t free, uint64_t capacity = 200 * kGB) {
  return TapeVolume{.vid = vid, .pool = pool, .model = "9940B", .capacity_bytes = capacity, .free_bytes = free};
}

TEST(VmgrTest, AddQueryRoundTrip) {
  Registry r;
  const TapeVolume v = vol("A00001", "p", 5 * kGB);
  r.add_volume(v);
  EXPECT_EQ(r.query("A00001"), v);
  EXPECT_EQ(code_of([&] { r.add_volume(v); }), Errc::kExists);
  EXPECT_EQ(code_of([&] { r.query("ZZZZZZ"); }), Errc::kNotFound);
  EXPECT_EQ(code_of([&] { r.set_status("ZZZZZZ", kFull); }), Errc::kNotFound);
  EXPECT_EQ(code_of([&] { r.add_volume(vol("a00001", "p", 1)); }), Errc::kInvalidArgument);
  EXPECT_EQ(code_of([&] { r.add_volume(vol("A0001", "p", 1)); }), Errc::kInvalidArgument);
  EXPECT_EQ(code_of([&] { r.add_volume(vol("A00002", "p", 2, 1)); }), Errc::kInvalidArgument);
  ASSERT_EQ(r.pools().size(), 1u);
  EXPECT_EQ(r.pools()[0].vids, std::vector<std::string>{"A00001"});
}

TEST(VmgrTest, BestFitAndTieBreak) {
  Registry r;
  r.add_volume(vol("AAAAAA", "p", 10 * kGB));
  r.add_volume(vol("BBBBBB", "p", 2 * kGB));
  EXPECT_EQ(r.select_tape_for_migration("p", 1 * kGB).vid, "BBBBBB");
  EXPECT_TRUE(r.query("BBBBBB").status & kBusy);
  // BUSY volumes are not handed out twice.
  EXPECT_EQ(r.select_tape_for_migration("p", 1 * kGB).vid, "AAAAAA");
  EXPECT_EQ(code_of([&] { r.select_tape_for_migration("p", 1); }), Errc::kNoEligibleVolume);
  r.release("AAAAAA");
  r.release("BBBBBB");
  r.add_volume(vol("CCCCCC", "p", 2 * kGB));
  EXPECT_EQ(r.select_tape_for_migration("p", 2 * kGB).vid, "BBBBBB");
  EXPECT_EQ(r.select_tape_for_migration("p", 2 * kGB, {"CCCCCC"}).vid, "AAAAAA");
  EXPECT_EQ(code_of([&] { r.select_tape_for_migration("nope", 1); }), Errc::kNotFound);
}

TEST(VmgrTest, FlaggedVolumesAreNeverChosen) {
  Registry r;
  r.add_volume(vol("F00001", "p", 1 * kGB));
  r.add_volume(vol("F00002", "p", 9 * kGB));
  r.set_status("F00001", kFull);
  EXPECT_EQ(r.select_tape_for_migration("p", 1).vid, "F00002");
  r.update_after_write("F00002", 0, 0);
  for (uint32_t flag : {kFull, kRdonly, kDisabled, kExported, kBusy}) {
    r.set_status("F00002", flag);
    EXPECT_EQ(code_of([&] { r.select_tape_for_migration("p", 1); }), Errc::kNoEligibleVolume);
  }
}

TEST(VmgrTest, WriteAccountingAndReserve) {
  Registry r;
  r.add_volume(vol("W00001", "p", 100 * kGB, 100 * kGB));
  const uint64_t reserve = r.reserve_bytes(r.query("W00001"));
  EXPECT_EQ(reserve, 1 * kGB);
  r.select_tape_for_migration("p", 10);
  r.update_after_write("W00001", 10 * kGB, 3, true);
  TapeVolume v = r.query("W00001");
  EXPECT_EQ(v.next_fseq, 4u);
  EXPECT_TRUE(v.status & kBusy);
  EXPECT_FALSE(v.status & kFree);
  r.update_after_write("W00001", 5 * kGB, 2);
  v = r.query("W00001");
  EXPECT_EQ(v.next_fseq, 6u);
  EXPECT_FALSE(v.status & kBusy);
  EXPECT_FALSE(v.status & kFull);
  r.update_after_write("W00001", v.free_bytes - reserve, 1);
  EXPECT_TRUE(r.query("W00001").status & kFull);
  EXPECT_EQ(code_of([&] { r.update_after_write("W00001", reserve + 1, 1); }), Errc::kUnderflow);
  EXPECT_EQ(code_of([&] { r.update_after_write("NOPE00", 1, 1); }), Errc::kNotFound);
}

struct LedgerVolume {
  TapeVolume v;
  uint64_t written = 0;
};

// Filter-then-min over every volume.
std::optional<std::string> brute_force(const std::vector<TapeVolume>& all, const std::string& pool, uint64_t want) {
  std::optional<TapeVolume> best;
  for (const auto& v : all) {
    if (v.pool != pool || (v.status & kIneligible) || v.free_bytes < want) continue;
    if (!best || v.free_bytes < best->free_bytes || (v.free_bytes == best->free_bytes && v.vid < best->vid)) best = v;
  }
  if (!best) return std::nullopt;
  return best->vid;
}

TEST(VmgrTest, SelectionMatchesBruteForceOracle) {
  std::mt19937_64 rng(7);
  Registry r;
  std::map<std::string, uint64_t> written;
  std::map<std::string, uint64_t> capacity;
  const std::vector<std::string> pools{"p0", "p1", "p2", "p3"};
  for (int i = 0; i < 300; ++i) {
    const uint64_t cap = 1000 + rng() % 100000;
    TapeVolume v = vol(make_vid("V", i), pools[rng() % pools.size()], cap, cap);
    if (rng() % 10 == 0) v.status = kRdonly;
    r.add_volume(v);
    capacity[v.vid] = cap;
  }
  for (int i = 0; i < 1000; ++i) {
    const std::string pool = pools[rng() % pools.size()];
    const uint64_t want = rng() % 60000;
    const auto all = r.list();
    const auto expect = brute_force(all, pool, want);
    std::optional<std::string> got;
    try {
      got = r.select_tape_for_migration(pool, want).vid;
    } catch (const CastorError& e) {
      ASSERT_EQ(e.code(), Errc::kNoEligibleVolume);
    }
    ASSERT_EQ(got, expect) << "request " << i;
    if (got) {
      const TapeVolume v = r.query(*got);
      ASSERT_GE(v.free_bytes, want);
      ASSERT_TRUE(v.status & kBusy);
      if (rng() % 3 == 0) {
        r.release(*got);
      } else {
        const uint64_t bytes = rng() % (v.free_bytes + 1);
        r.update_after_write(*got, bytes, 1);
        written[*got] += bytes;
      }
    }
  }
  // Conservation against the running ledger.
  for (const auto& v : r.list()) EXPECT_EQ(v.capacity_bytes - v.free_bytes, written[v.vid]) << v.vid;
}

TEST(VmgrTest, ConcurrentSelectsNeverShareAVolume) {
  Registry r;
  for (int i = 0; i < 64; ++i) r.add_volume(vol(make_vid("C", i), "p", 1000));
  std::mutex mu;
  std::set<std::string> seen;
  std::atomic<int> dupes{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < 16; ++i) {
        const std::string vid = r.select_tape_for_migration("p", 1).vid;
        std::lock_guard lock(mu);
        if (!seen.insert(vid).second) ++dupes;
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(dupes.load(), 0);
  EXPECT_EQ(seen.size(), 64u);
}

TEST(VmgrTest, JournalReplay) {
  test::TempDir dir;
  std::vector<TapeVolume> before;
  {
    Registry r({.journal_dir = dir.path(), .journal = {.sync = false, .snapshot_every = 10}});
    r.add_pool({.name = "p", .uid = 3, .gid = 4});
    for (int i = 0; i < 25; ++i) r.add_volume(vol(make_vid("J", i), "p", 1000 + i, 5000));
    for (int i = 0; i < 10; ++i) {
      const auto v = r.select_tape_for_migration("p", 100);
      r.update_after_write(v.vid, 50 + i, 2, i % 2 == 0);
    }
    r.set_status("J00020", kDisabled);
    before = r.list();
  }
  Registry r({.journal_dir = dir.path(), .journal = {.sync = false}});
  EXPECT_EQ(r.list(), before);
  EXPECT_EQ(r.pools().at(0).uid, 3u);
}

TEST(VmgrTest, SlotScaleQueriesStayFast) {
  Registry r;
  for (uint32_t i = 0; i < 2 * 27500; ++i) r.add_volume(vol(make_vid(i < 27500 ? "S" : "T", i % 27500), "p", 1000 + i));
  std::mt19937 rng(1);
  std::vector<double> ms;
  for (int i = 0; i < 501; ++i) {
    const std::string vid = make_vid(i % 2 ? "S" : "T", rng() % 27500);
    const auto t0 = std::chrono::steady_clock::now();
    r.query(vid);
    ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  std::nth_element(ms.begin(), ms.begin() + 250, ms.end());
  EXPECT_LT(ms[250], 10.0);
}

TEST(PlantTest, DefaultPlantMatchesInstallation) {
  const Plant plant = load_plant_file(std::string(CASTOR_SOURCE_DIR) + "/config/plant_default.conf");
  ASSERT_EQ(plant.models.size(), 7u);
  EXPECT_EQ(plant.total_drives(), 82u);
  EXPECT_EQ(plant.total_servers(), 43u);
  const std::map<std::string, std::pair<uint32_t, uint32_t>> table{
      {"9940B", {21, 20}}, {"9940A", {28, 10}}, {"9840", {15, 5}}, {"3590", {4, 2}},
      {"DLT7000", {6, 2}}, {"LTO", {6, 3}},     {"SDLT", {2, 1}}};
  for (const auto& m : plant.models) EXPECT_EQ(table.at(m.model), std::make_pair(m.drives, m.servers)) << m.model;
  const auto drives = plant.drives();
  EXPECT_EQ(drives.size(), 82u);
  std::set<std::string> names;
  std::set<std::string> servers;
  for (const auto& d : drives) {
    names.insert(d.drive_name);
    servers.insert(d.server_name);
  }
  EXPECT_EQ(names.size(), 82u);
  EXPECT_EQ(servers.size(), 43u);
  EXPECT_TRUE(plant.can_read("9940B", "9940A"));
  EXPECT_FALSE(plant.can_read("9940A", "9940B"));
  EXPECT_TRUE(plant.can_read("LTO", "LTO"));
  EXPECT_EQ(plant.model("9940B").capacity_bytes, 200 * kGB);
  EXPECT_EQ(code_of([&] { plant.model("3480"); }), Errc::kUnknownModel);
}

TEST(PlantTest, RejectsBadModels) {
  EXPECT_EQ(code_of([] {
              load_plant(Config::parse("[model.X]\ndrives = 0\nservers = 1\nstreaming_rate_bytes_per_s = 1\n"
                                       "mount_seconds = 1\nposition_seconds_per_fseq = 1\ncapacity_bytes = 1\n"));
            }),
            Errc::kSpecInvalid);
  EXPECT_EQ(code_of([] { make_vid("ABCDE", 10); }), Errc::kSpecInvalid);
  EXPECT_EQ(make_vid("B", 7), "B00007");
}

TEST(VmgrServiceTest, WireRoundTrip) {
  const Plant plant = load_plant_file(std::string(CASTOR_SOURCE_DIR) + "/config/plant_default.conf");
  Registry r;
  for (const auto& v : plant.volumes()) r.add_volume(v);
  Dispatcher d = make_dispatcher(r, plant);
  auto connector = std::make_shared<Connector>();
  connector->register_loopback("vmgr", &d);
  VmgrClient c(connector->connect("loop://vmgr"));
  EXPECT_EQ(c.plant_models().size(), 7u);
  EXPECT_EQ(c.plant_drives().size(), 82u);
  EXPECT_EQ(c.list("default").size(), 200u);
  const TapeVolume v = c.select_tape_for_migration("default", 1000, {"B00000"});
  EXPECT_EQ(v.vid, "B00001");
  c.update_after_write(v.vid, 1000, 1);
  EXPECT_EQ(c.query(v.vid).free_bytes, 200 * kGB - 1000);
  c.set_status("B00001", kRdonly | kFull);
  EXPECT_EQ(c.query("B00001").status, kRdonly | kFull);
  try {
    c.select_tape_for_migration("legacy", 61 * kGB);
    ADD_FAILURE();
  } catch (const CastorError& e) {
    EXPECT_EQ(e.code(), Errc::kNoEligibleVolume);
  }
}

}  // namespace
}  // namespace castor::vmgr
