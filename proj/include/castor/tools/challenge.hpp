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
#include <string>
#include <vector>

#include "castor/common/config.hpp"
#include "castor/stager/types.hpp"
#include "castor/vmgr/plant.hpp"

// Data-challenge harness: replays write and read streams against an
// in-process site on the virtual clock and reports tape throughput.
namespace castor::challenge {

enum class StreamKind { kWrite, kRead };

struct StreamSpec {
  std::string name;
  StreamKind kind = StreamKind::kWrite;
  uint64_t file_size_bytes = 0;
  uint64_t files = 0;  // 0: as many as fit in the duration
  double target_rate_bytes_per_s = 0;
  double start_offset_s = 0;
  std::string pool;  // disk pool; empty: the first one
};

struct WorkloadSpec {
  std::string name;
  std::vector<StreamSpec> streams;
  double duration_s = 0;
  double interval_s = 60;
  uint64_t seed = 1;
  vmgr::Plant plant;
  std::vector<stager::DiskPool> pools;
};

// The text of config/plant_default.conf.
const std::string& default_plant_text();
std::vector<std::string> builtin_workloads();
std::string builtin_workload_text(const std::string& name);
// Sections: [workload] name duration_s interval_s seed plant; [stream.NAME]
// kind file_size_bytes files target_rate_bytes_per_s start_offset_s pool;
// [diskpool.NAME] as for the stager. plant = "default" uses the built-in
// plant, a path loads a plant file, and an empty value reads model./pool.
// sections from the workload itself.
WorkloadSpec parse_workload(const Config& config, const std::filesystem::path& base_dir = {});
WorkloadSpec load_workload(const std::string& name_or_path);

struct Interval {
  double start_s = 0;
  double end_s = 0;
  uint64_t tape_bytes = 0;
  double throughput_bytes_per_s = 0;
  uint64_t backlog_bytes = 0;  // acknowledged and not yet on tape at end_s
};

struct StreamTotals {
  std::string name;
  std::string kind;
  uint64_t files = 0;
  uint64_t bytes = 0;
};

struct ChallengeReport {
  std::string workload;
  uint64_t seed = 0;
  double duration_s = 0;
  uint32_t drives = 0;
  std::vector<StreamTotals> streams;
  uint64_t acknowledged_files = 0;
  uint64_t acknowledged_bytes = 0;
  uint64_t rejected_writes = 0;
  uint64_t read_requests = 0;
  uint64_t tape_bytes_in_window = 0;
  double aggregate_throughput_bytes_per_s = 0;
  std::vector<Interval> intervals;
  double migrated_fraction_at_end = 0;
  double migrated_fraction_after_drain = 0;
  double drain_s = 0;
  double queue_wait_mean_s = 0;
  double queue_wait_p95_s = 0;
  uint64_t lost_files = 0;
  double cache_hit_ratio = 0;
  uint64_t recall_jobs = 0;
  uint64_t migration_jobs = 0;
  uint64_t failed_jobs = 0;
};

struct RunOptions {
  std::filesystem::path work_dir;  // empty: a temporary directory, removed afterwards
};

ChallengeReport run_challenge(const WorkloadSpec& spec, const RunOptions& options = {});

Json to_json(const ChallengeReport& r);
std::string to_text(const ChallengeReport& r);

}  // namespace castor::challenge
