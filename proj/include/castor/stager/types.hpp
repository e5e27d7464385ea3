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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "castor/common/config.hpp"
#include "castor/common/rpc.hpp"

namespace castor::stager {

enum class CopyState { kRecallPending, kRecalling, kStaged, kToMigrate, kMigrating, kInvalid };

std::string_view state_name(CopyState s);
CopyState parse_state(std::string_view s);
bool legal_transition(CopyState from, CopyState to);

struct FileSystem {
  std::string server;
  std::string mount;
  uint64_t capacity_bytes = 0;
  uint64_t used_bytes = 0;

  uint64_t free_bytes() const { return used_bytes >= capacity_bytes ? 0 : capacity_bytes - used_bytes; }
};

struct DiskPool {
  std::string name;
  std::vector<FileSystem> filesystems;
  double gc_low_watermark = 0.7;
  double gc_high_watermark = 0.9;
  uint64_t migration_threshold_bytes = 256ull << 20;
  double migration_max_age_s = 300;
  std::string tape_pool = "default";
  uint32_t copies_required = 1;
  // Tape streams the migrator may run at once for this pool.
  uint32_t migration_streams = 4;

  uint64_t capacity() const;
  uint64_t used() const;
  double used_fraction() const;
  void validate() const;
};

// One file's presence in a disk pool.
struct DiskCopy {
  uint64_t file_id = 0;
  std::string pool;
  std::string server;
  std::string mount;
  std::string path;
  uint64_t size_bytes = 0;
  CopyState state = CopyState::kToMigrate;
  int64_t last_access_us = 0;
  uint32_t crc32 = 0;
  // A stage_out that has not seen put_done yet; `reserved` bytes are held.
  bool writing = false;
  uint64_t reserved_bytes = 0;
  int64_t to_migrate_since_us = 0;
  uint32_t copies_complete = 0;
  std::vector<std::string> copy_vids;

  uint64_t charged_bytes() const { return size_bytes + reserved_bytes; }
};

struct Location {
  uint64_t file_id = 0;
  std::string server;
  std::string address;  // rfiod endpoint for `server`
  std::string path;
  bool pending = false;  // stage_in without waiting: recall still running
};

struct MigrationReport {
  uint64_t files = 0;
  uint64_t bytes = 0;
  std::vector<std::string> tapes_used;
  std::string error;  // set when work was left behind (e.g. NoEligibleVolume)
};

struct GcReport {
  uint64_t evicted_files = 0;
  uint64_t freed_bytes = 0;
};

struct RepackReport {
  uint64_t files_moved = 0;
  uint64_t bytes = 0;
  std::vector<std::string> new_vids;
  std::vector<uint64_t> failed_files;
  bool exported = false;
  std::string error;
};

struct TransferRecord {
  std::string drive;
  std::string vid;
  bool to_tape = true;
  uint64_t bytes = 0;
  int64_t start_us = 0;
  int64_t end_us = 0;
  double stream_s = 0;
};

struct StagerStats {
  uint64_t cache_hits = 0;
  uint64_t cache_misses = 0;
  uint64_t recall_jobs = 0;
  uint64_t migration_jobs = 0;
  uint64_t copies_migrated = 0;
  uint64_t bytes_to_tape = 0;
  uint64_t gc_evictions = 0;
  uint64_t failed_jobs = 0;
};

std::vector<DiskPool> load_pools(const Config& config);

void to_json(Json& j, const FileSystem& f);
void from_json(const Json& j, FileSystem& f);
void to_json(Json& j, const DiskPool& p);
void from_json(const Json& j, DiskPool& p);
void to_json(Json& j, const DiskCopy& c);
void from_json(const Json& j, DiskCopy& c);
void to_json(Json& j, const Location& l);
void from_json(const Json& j, Location& l);
void to_json(Json& j, const MigrationReport& r);
void from_json(const Json& j, MigrationReport& r);
void to_json(Json& j, const GcReport& r);
void from_json(const Json& j, GcReport& r);
void to_json(Json& j, const RepackReport& r);
void from_json(const Json& j, RepackReport& r);
void to_json(Json& j, const TransferRecord& r);
void from_json(const Json& j, TransferRecord& r);
void to_json(Json& j, const StagerStats& s);
void from_json(const Json& j, StagerStats& s);

}  // namespace castor::stager
