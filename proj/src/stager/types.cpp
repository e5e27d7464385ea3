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

#include "castor/stager/types.hpp"

#include "castor/common/error.hpp"

namespace castor::stager {

namespace {

constexpr std::pair<CopyState, std::string_view> kStates[] = {
    {CopyState::kRecallPending, "RECALL_PENDING"}, {CopyState::kRecalling, "RECALLING"},
    {CopyState::kStaged, "STAGED"},                {CopyState::kToMigrate, "TO_MIGRATE"},
    {CopyState::kMigrating, "MIGRATING"},          {CopyState::kInvalid, "INVALID"},
};

}  // namespace

std::string_view state_name(CopyState s) {
  for (const auto& [state, name] : kStates) {
    if (state == s) return name;
  }
  return "?";
}

CopyState parse_state(std::string_view s) {
  for (const auto& [state, name] : kStates) {
    if (name == s) return state;
  }
  raise(Errc::kInvalidArgument, "unknown disk copy state '" + std::string(s) + "'");
}

bool legal_transition(CopyState from, CopyState to) {
  using S = CopyState;
  if (to == S::kInvalid) return true;
  switch (from) {
    case S::kRecallPending:
      return to == S::kRecalling;
    case S::kRecalling:
      return to == S::kStaged;
    case S::kToMigrate:
      return to == S::kMigrating;
    case S::kMigrating:
      // Back to TO_MIGRATE when a job fails or more copies are due.
      return to == S::kStaged || to == S::kToMigrate;
    case S::kStaged:
    case S::kInvalid:
      return false;
  }
  return false;
}

uint64_t DiskPool::capacity() const {
  uint64_t c = 0;
  for (const auto& f : filesystems) c += f.capacity_bytes;
  return c;
}

uint64_t DiskPool::used() const {
  uint64_t u = 0;
  for (const auto& f : filesystems) u += f.used_bytes;
  return u;
}

double DiskPool::used_fraction() const {
  const uint64_t c = capacity();
  return c == 0 ? 1.0 : static_cast<double>(used()) / static_cast<double>(c);
}

void DiskPool::validate() const {
  if (name.empty()) raise(Errc::kSpecInvalid, "disk pool without a name");
  if (filesystems.empty()) raise(Errc::kSpecInvalid, "disk pool " + name + " has no filesystems");
  if (!(gc_low_watermark > 0 && gc_low_watermark < gc_high_watermark && gc_high_watermark <= 1)) {
    raise(Errc::kSpecInvalid, "disk pool " + name + " needs 0 < low < high <= 1");
  }
  if (copies_required == 0 || migration_streams == 0) {
    raise(Errc::kSpecInvalid, "disk pool " + name + " needs copies_required and migration_streams >= 1");
  }
  for (const auto& f : filesystems) {
    if (f.server.empty() || f.mount.empty() || f.mount.front() != '/' || f.capacity_bytes == 0) {
      raise(Errc::kSpecInvalid, "disk pool " + name + " has a bad filesystem '" + f.server + ":" + f.mount + "'");
    }
  }
}

// [diskpool.NAME] with filesystems = ["server:/mount:capacity", ...].
std::vector<DiskPool> load_pools(const Config& config) {
  std::vector<DiskPool> pools;
  for (const auto& section : config.sections_with_prefix("diskpool.")) {
    DiskPool p;
    p.name = section.substr(std::string("diskpool.").size());
    for (const auto& spec : config.get_strings(section, "filesystems")) {
      const auto a = spec.find(':');
      const auto b = spec.rfind(':');
      if (a == std::string::npos || a == b) raise(Errc::kSpecInvalid, "filesystem '" + spec + "' is not server:/mount:bytes");
      FileSystem f;
      f.server = spec.substr(0, a);
      f.mount = spec.substr(a + 1, b - a - 1);
      try {
        f.capacity_bytes = std::stoull(spec.substr(b + 1));
      } catch (const std::exception&) {
        raise(Errc::kSpecInvalid, "filesystem '" + spec + "' has a bad capacity");
      }
      p.filesystems.push_back(f);
    }
    p.gc_low_watermark = config.get_double(section, "gc_low_watermark", p.gc_low_watermark);
    p.gc_high_watermark = config.get_double(section, "gc_high_watermark", p.gc_high_watermark);
    p.migration_threshold_bytes =
        static_cast<uint64_t>(config.get_int(section, "migration_threshold_bytes", static_cast<int64_t>(p.migration_threshold_bytes)));
    p.migration_max_age_s = config.get_double(section, "migration_max_age_s", p.migration_max_age_s);
    p.tape_pool = config.get_string(section, "tape_pool", p.tape_pool);
    p.copies_required = static_cast<uint32_t>(config.get_int(section, "copies_required", p.copies_required));
    p.migration_streams = static_cast<uint32_t>(config.get_int(section, "migration_streams", p.migration_streams));
    p.validate();
    pools.push_back(std::move(p));
  }
  return pools;
}

void to_json(Json& j, const FileSystem& f) {
  j = Json{{"server", f.server}, {"mount", f.mount}, {"capacity_bytes", f.capacity_bytes}, {"used_bytes", f.used_bytes}};
}

void from_json(const Json& j, FileSystem& f) {
  f.server = j.at("server").get<std::string>();
  f.mount = j.at("mount").get<std::string>();
  f.capacity_bytes = j.at("capacity_bytes").get<uint64_t>();
  f.used_bytes = j.value("used_bytes", uint64_t{0});
}

void to_json(Json& j, const DiskPool& p) {
  j = Json{{"name", p.name},
           {"filesystems", p.filesystems},
           {"gc_low_watermark", p.gc_low_watermark},
           {"gc_high_watermark", p.gc_high_watermark},
           {"migration_threshold_bytes", p.migration_threshold_bytes},
           {"migration_max_age_s", p.migration_max_age_s},
           {"tape_pool", p.tape_pool},
           {"copies_required", p.copies_required},
           {"migration_streams", p.migration_streams}};
}

void from_json(const Json& j, DiskPool& p) {
  p.name = j.at("name").get<std::string>();
  p.filesystems = j.at("filesystems").get<std::vector<FileSystem>>();
  p.gc_low_watermark = j.at("gc_low_watermark").get<double>();
  p.gc_high_watermark = j.at("gc_high_watermark").get<double>();
  p.migration_threshold_bytes = j.at("migration_threshold_bytes").get<uint64_t>();
  p.migration_max_age_s = j.at("migration_max_age_s").get<double>();
  p.tape_pool = j.at("tape_pool").get<std::string>();
  p.copies_required = j.at("copies_required").get<uint32_t>();
  p.migration_streams = j.at("migration_streams").get<uint32_t>();
}

void to_json(Json& j, const DiskCopy& c) {
  j = Json{{"file_id", c.file_id},
           {"pool", c.pool},
           {"server", c.server},
           {"mount", c.mount},
           {"path", c.path},
           {"size_bytes", c.size_bytes},
           {"state", state_name(c.state)},
           {"last_access_us", c.last_access_us},
           {"crc32", c.crc32},
           {"writing", c.writing},
           {"reserved_bytes", c.reserved_bytes},
           {"to_migrate_since_us", c.to_migrate_since_us},
           {"copies_complete", c.copies_complete},
           {"copy_vids", c.copy_vids}};
}

void from_json(const Json& j, DiskCopy& c) {
  c.file_id = j.at("file_id").get<uint64_t>();
  c.pool = j.at("pool").get<std::string>();
  c.server = j.at("server").get<std::string>();
  c.mount = j.at("mount").get<std::string>();
  c.path = j.at("path").get<std::string>();
  c.size_bytes = j.at("size_bytes").get<uint64_t>();
  c.state = parse_state(j.at("state").get<std::string>());
  c.last_access_us = j.at("last_access_us").get<int64_t>();
  c.crc32 = j.at("crc32").get<uint32_t>();
  c.writing = j.at("writing").get<bool>();
  c.reserved_bytes = j.at("reserved_bytes").get<uint64_t>();
  c.to_migrate_since_us = j.at("to_migrate_since_us").get<int64_t>();
  c.copies_complete = j.at("copies_complete").get<uint32_t>();
  c.copy_vids = j.at("copy_vids").get<std::vector<std::string>>();
}

void to_json(Json& j, const Location& l) {
  j = Json{{"file_id", l.file_id}, {"server", l.server}, {"address", l.address}, {"path", l.path}, {"pending", l.pending}};
}

void from_json(const Json& j, Location& l) {
  l.file_id = j.at("file_id").get<uint64_t>();
  l.server = j.at("server").get<std::string>();
  l.address = j.at("address").get<std::string>();
  l.path = j.at("path").get<std::string>();
  l.pending = j.value("pending", false);
}

void to_json(Json& j, const MigrationReport& r) {
  j = Json{{"files", r.files}, {"bytes", r.bytes}, {"tapes_used", r.tapes_used}, {"error", r.error}};
}

void from_json(const Json& j, MigrationReport& r) {
  r.files = j.at("files").get<uint64_t>();
  r.bytes = j.at("bytes").get<uint64_t>();
  r.tapes_used = j.at("tapes_used").get<std::vector<std::string>>();
  r.error = j.value("error", std::string());
}

void to_json(Json& j, const GcReport& r) { j = Json{{"evicted_files", r.evicted_files}, {"freed_bytes", r.freed_bytes}}; }

void from_json(const Json& j, GcReport& r) {
  r.evicted_files = j.at("evicted_files").get<uint64_t>();
  r.freed_bytes = j.at("freed_bytes").get<uint64_t>();
}

void to_json(Json& j, const RepackReport& r) {
  j = Json{{"files_moved", r.files_moved}, {"bytes", r.bytes},       {"new_vids", r.new_vids},
           {"failed_files", r.failed_files}, {"exported", r.exported}, {"error", r.error}};
}

void from_json(const Json& j, RepackReport& r) {
  r.files_moved = j.at("files_moved").get<uint64_t>();
  r.bytes = j.at("bytes").get<uint64_t>();
  r.new_vids = j.at("new_vids").get<std::vector<std::string>>();
  r.failed_files = j.at("failed_files").get<std::vector<uint64_t>>();
  r.exported = j.at("exported").get<bool>();
  r.error = j.value("error", std::string());
}

void to_json(Json& j, const TransferRecord& r) {
  j = Json{{"drive", r.drive},       {"vid", r.vid},         {"to_tape", r.to_tape},  {"bytes", r.bytes},
           {"start_us", r.start_us}, {"end_us", r.end_us}, {"stream_s", r.stream_s}};
}

void from_json(const Json& j, TransferRecord& r) {
  r.drive = j.at("drive").get<std::string>();
  r.vid = j.at("vid").get<std::string>();
  r.to_tape = j.at("to_tape").get<bool>();
  r.bytes = j.at("bytes").get<uint64_t>();
  r.start_us = j.at("start_us").get<int64_t>();
  r.end_us = j.at("end_us").get<int64_t>();
  r.stream_s = j.at("stream_s").get<double>();
}

void to_json(Json& j, const StagerStats& s) {
  j = Json{{"cache_hits", s.cache_hits},         {"cache_misses", s.cache_misses},
           {"recall_jobs", s.recall_jobs},       {"migration_jobs", s.migration_jobs},
           {"copies_migrated", s.copies_migrated}, {"bytes_to_tape", s.bytes_to_tape},
           {"gc_evictions", s.gc_evictions},     {"failed_jobs", s.failed_jobs}};
}

void from_json(const Json& j, StagerStats& s) {
  s.cache_hits = j.at("cache_hits").get<uint64_t>();
  s.cache_misses = j.at("cache_misses").get<uint64_t>();
  s.recall_jobs = j.at("recall_jobs").get<uint64_t>();
  s.migration_jobs = j.at("migration_jobs").get<uint64_t>();
  s.copies_migrated = j.at("copies_migrated").get<uint64_t>();
  s.bytes_to_tape = j.at("bytes_to_tape").get<uint64_t>();
  s.gc_evictions = j.at("gc_evictions").get<uint64_t>();
  s.failed_jobs = j.at("failed_jobs").get<uint64_t>();
}

}  // namespace castor::stager
