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

#include "castor/tools/challenge.hpp"

namespace castor::challenge {
namespace {

const char* kSmall = R"(
[workload]
name = "small"
duration_s = 600
interval_s = 120
seed = 5
plant = "default"

[stream.raw]
kind = "WRITE"
file_size_bytes = 50000000
target_rate_bytes_per_s = 5000000

[stream.ana]
kind = "READ"
file_size_bytes = 50000000
target_rate_bytes_per_s = 1000000
start_offset_s = 200

[diskpool.small]
filesystems = ["fs1:/srv/a:20000000000"]
migration_threshold_bytes = 200000000
migration_streams = 2
)";

Errc code_of(const std::string& text) {
  try {
    parse_workload(Config::parse(text));
  } catch (const CastorError& e) {
    return e.code();
  }
  return Errc::kInternal;
}

TEST(Challenge, BuiltinsParse) {
  for (const auto& name : builtin_workloads()) {
    const auto spec = load_workload(name);
    EXPECT_EQ(spec.name, name);
    EXPECT_GT(spec.duration_s, 0);
  }
  EXPECT_EQ(load_workload("alice-scaled").plant.total_drives(), 10u);
}

TEST(Challenge, EmptyWorkloadReportsNothing) {
  const auto r = run_challenge(load_workload("empty"));
  EXPECT_EQ(r.acknowledged_files, 0u);
  EXPECT_EQ(r.tape_bytes_in_window, 0u);
  EXPECT_EQ(r.lost_files, 0u);
  EXPECT_EQ(to_json(r).at("report_version"), 1);
}

TEST(Challenge, SmallRunIsConsistentAndDeterministic) {
  const auto spec = parse_workload(Config::parse(kSmall));
  const auto a = run_challenge(spec);
  const auto b = run_challenge(spec);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  EXPECT_EQ(a.acknowledged_files, 60u);
  EXPECT_GT(a.read_requests, 0u);
  EXPECT_EQ(a.lost_files, 0u);
  EXPECT_DOUBLE_EQ(a.migrated_fraction_after_drain, 1.0);
  ASSERT_EQ(a.intervals.size(), 5u);
  double sum = 0;
  for (const auto& iv : a.intervals) sum += static_cast<double>(iv.tape_bytes);
  EXPECT_NEAR(sum, static_cast<double>(a.tape_bytes_in_window), 0.001 * static_cast<double>(a.tape_bytes_in_window));
  EXPECT_LE(a.queue_wait_mean_s, a.queue_wait_p95_s + 1e-9);
}

TEST(Challenge, SeedChangesReads) {
  auto spec = parse_workload(Config::parse(kSmall));
  const auto a = run_challenge(spec);
  spec.seed = 6;
  const auto b = run_challenge(spec);
  EXPECT_EQ(a.acknowledged_files, b.acknowledged_files);
  EXPECT_EQ(b.lost_files, 0u);
}

TEST(Challenge, InvalidSpecsAreRejected) {
  const std::string pool = "\n[diskpool.p]\nfilesystems = [\"fs1:/srv/a:1000000000\"]\n";
  const std::string head = "[workload]\nplant = \"default\"\n";
  EXPECT_EQ(code_of(head + "duration_s = 0\n" + pool), Errc::kSpecInvalid);
  EXPECT_EQ(code_of(head + "duration_s = 60\ninterval_s = 0\n" + pool), Errc::kSpecInvalid);
  EXPECT_EQ(code_of(head), Errc::kSpecInvalid);
  const std::string stream = "[stream.s]\nkind = \"WRITE\"\n";
  EXPECT_EQ(code_of(head + pool + stream + "file_size_bytes = 0\ntarget_rate_bytes_per_s = 1\n"), Errc::kSpecInvalid);
  EXPECT_EQ(code_of(head + pool + stream + "file_size_bytes = 10\ntarget_rate_bytes_per_s = 0\n"), Errc::kSpecInvalid);
  EXPECT_EQ(code_of(head + pool + stream + "file_size_bytes = 10\ntarget_rate_bytes_per_s = 1\nstart_offset_s = -1\n"),
            Errc::kSpecInvalid);
  EXPECT_EQ(code_of(head + pool + stream + "file_size_bytes = 10\ntarget_rate_bytes_per_s = 1\npool = \"x\"\n"),
            Errc::kSpecInvalid);
  EXPECT_EQ(code_of(head + pool + "tape_pool = \"nope\"\n"), Errc::kSpecInvalid);
}

}  // namespace
}  // namespace castor::challenge
