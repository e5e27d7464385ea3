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
#include <set>
#include <string>
#include <vector>

#include "castor/common/config.hpp"
#include "castor/vmgr/types.hpp"

namespace castor::vmgr {

struct DriveSpec {
  std::string drive_name;
  std::string server_name;
  std::string model;
};

struct PoolSpec {
  TapePool pool;
  std::string model;
  std::string vid_prefix;
  uint32_t count = 0;
  uint64_t capacity_bytes = 0;  // 0: the model's default
};

// Tape plant description: drive models with counts and timing, volume pools,
// and which drive models can read which media.
struct Plant {
  std::vector<DrivePlantModel> models;
  std::vector<PoolSpec> pools;
  // drive model -> media models it can read besides its own
  std::map<std::string, std::set<std::string>> reads;
  double unmount_fraction = 0.5;
  double reserve_fraction = 0.01;

  const DrivePlantModel& model(const std::string& name) const;
  bool can_read(const std::string& drive_model, const std::string& media_model) const;
  uint32_t total_drives() const;
  uint32_t total_servers() const;
  // Drives are spread round-robin over their model's servers.
  std::vector<DriveSpec> drives() const;
  std::vector<TapeVolume> volumes() const;
};

// Sections: [model.NAME] drives servers streaming_rate_bytes_per_s
// mount_seconds position_seconds_per_fseq capacity_bytes; [pool.NAME] model
// vid_prefix count uid gid capacity_bytes; [compat] DRIVE = ["MEDIA", ...];
// [plant] unmount_fraction reserve_fraction.
Plant load_plant(const Config& config);
Plant load_plant_file(const std::filesystem::path& path);

std::string make_vid(const std::string& prefix, uint32_t index);

}  // namespace castor::vmgr
