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
#include <string>
#include <vector>

#include "castor/common/rpc.hpp"

namespace castor::vmgr {

enum VolumeFlag : uint32_t {
  kFree = 1u << 0,
  kBusy = 1u << 1,
  kFull = 1u << 2,
  kRdonly = 1u << 3,
  kDisabled = 1u << 4,
  kExported = 1u << 5,
};

// Any of these keeps a volume out of migration selection.
inline constexpr uint32_t kIneligible = kBusy | kFull | kRdonly | kDisabled | kExported;

std::vector<std::string> flag_names(uint32_t flags);
uint32_t parse_flags(const std::vector<std::string>& names);

struct TapeVolume {
  std::string vid;
  std::string pool;
  std::string model;
  uint64_t capacity_bytes = 0;
  uint64_t free_bytes = 0;
  uint32_t next_fseq = 1;
  uint32_t status = kFree;

  bool operator==(const TapeVolume&) const = default;
};

struct TapePool {
  std::string name;
  uint32_t uid = 0;
  uint32_t gid = 0;
  std::vector<std::string> vids;

  bool operator==(const TapePool&) const = default;
};

struct DrivePlantModel {
  std::string model;
  uint32_t drives = 0;
  uint32_t servers = 0;
  double streaming_rate_bytes_per_s = 0;
  double mount_seconds = 0;
  double position_seconds_per_fseq = 0;
  uint64_t capacity_bytes = 0;

  bool operator==(const DrivePlantModel&) const = default;
};

// Six characters, uppercase letters and digits.
bool valid_vid(std::string_view vid);

void to_json(Json& j, const TapeVolume& v);
void from_json(const Json& j, TapeVolume& v);
void to_json(Json& j, const TapePool& p);
void from_json(const Json& j, TapePool& p);
void to_json(Json& j, const DrivePlantModel& m);
void from_json(const Json& j, DrivePlantModel& m);

}  // namespace castor::vmgr
