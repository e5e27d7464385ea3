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

#include "castor/common/rpc.hpp"

namespace castor::ns {

enum class EntryKind { kDirectory, kFile };

struct NsEntry {
  uint64_t file_id = 0;
  uint64_t parent_id = 0;
  std::string name;
  EntryKind kind = EntryKind::kFile;
  uint64_t size_bytes = 0;
  uint32_t mode = 0;
  uint32_t uid = 0;
  uint32_t gid = 0;
  int64_t ctime_us = 0;
  int64_t mtime_us = 0;
  std::optional<uint32_t> checksum;

  bool is_dir() const { return kind == EntryKind::kDirectory; }
  bool operator==(const NsEntry&) const = default;
};

// One contiguous piece of one tape copy of a file.
struct Segment {
  uint64_t file_id = 0;
  uint32_t copy_no = 1;
  uint32_t seg_seq = 0;
  std::string vid;
  uint32_t fseq = 1;
  uint64_t seg_size = 0;
  uint32_t seg_checksum = 0;

  bool operator==(const Segment&) const = default;
};

struct ServerRoute {
  std::string domain;
  std::string top_dir;
  std::string instance_addr;
  // High 16 bits of every file_id the instance allocates; lets clients route
  // id-based calls.
  uint16_t instance_id = 0;

  std::string alias() const { return "cns" + top_dir; }
  bool operator==(const ServerRoute&) const = default;
};

inline constexpr unsigned kInstanceShift = 48;
inline uint16_t instance_of(uint64_t file_id) { return static_cast<uint16_t>(file_id >> kInstanceShift); }

void to_json(Json& j, const NsEntry& e);
void from_json(const Json& j, NsEntry& e);
void to_json(Json& j, const Segment& s);
void from_json(const Json& j, Segment& s);
void to_json(Json& j, const ServerRoute& r);
void from_json(const Json& j, ServerRoute& r);

std::string_view kind_name(EntryKind kind);

}  // namespace castor::ns
