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

#include "castor/vmgr/plant.hpp"

#include <algorithm>
#include <cctype>

namespace castor::vmgr {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

const DrivePlantModel& Plant::model(const std::string& name) const {
  for (const auto& m : models) {
    if (m.model == name) return m;
  }
  raise(Errc::kUnknownModel, "no drive model '" + name + "' in the plant");
}

bool Plant::can_read(const std::string& drive_model, const std::string& media_model) const {
  if (drive_model == media_model) return true;
  auto it = reads.find(drive_model);
  return it != reads.end() && it->second.count(media_model) != 0;
}

uint32_t Plant::total_drives() const {
  uint32_t n = 0;
  for (const auto& m : models) n += m.drives;
  return n;
}

uint32_t Plant::total_servers() const {
  uint32_t n = 0;
  for (const auto& m : models) n += m.servers;
  return n;
}

std::vector<DriveSpec> Plant::drives() const {
  std::vector<DriveSpec> out;
  for (const auto& m : models) {
    const std::string tag = lower(m.model);
    for (uint32_t i = 0; i < m.drives; ++i) {
      char drive[64];
      char server[64];
      std::snprintf(drive, sizeof drive, "%s-%02u", tag.c_str(), i);
      std::snprintf(server, sizeof server, "tpsrv-%s-%02u", tag.c_str(), i % m.servers);
      out.push_back({drive, server, m.model});
    }
  }
  return out;
}

std::string make_vid(const std::string& prefix, uint32_t index) {
  if (prefix.size() >= 6) raise(Errc::kSpecInvalid, "vid prefix '" + prefix + "' leaves no room for a number");
  std::string digits = std::to_string(index);
  const size_t width = 6 - prefix.size();
  if (digits.size() > width) raise(Errc::kSpecInvalid, "vid index " + digits + " does not fit after '" + prefix + "'");
  return prefix + std::string(width - digits.size(), '0') + digits;
}

std::vector<TapeVolume> Plant::volumes() const {
  std::vector<TapeVolume> out;
  for (const auto& p : pools) {
    const DrivePlantModel& m = model(p.model);
    const uint64_t capacity = p.capacity_bytes != 0 ? p.capacity_bytes : m.capacity_bytes;
    for (uint32_t i = 0; i < p.count; ++i) {
      TapeVolume v;
      v.vid = make_vid(p.vid_prefix, i);
      v.pool = p.pool.name;
      v.model = p.model;
      v.capacity_bytes = capacity;
      v.free_bytes = capacity;
      out.push_back(std::move(v));
    }
  }
  return out;
}

Plant load_plant(const Config& config) {
  Plant plant;
  for (const auto& section : config.sections_with_prefix("model.")) {
    DrivePlantModel m;
    m.model = section.substr(6);
    m.drives = static_cast<uint32_t>(config.get_int(section, "drives"));
    m.servers = static_cast<uint32_t>(config.get_int(section, "servers"));
    m.streaming_rate_bytes_per_s = config.get_double(section, "streaming_rate_bytes_per_s");
    m.mount_seconds = config.get_double(section, "mount_seconds");
    m.position_seconds_per_fseq = config.get_double(section, "position_seconds_per_fseq");
    m.capacity_bytes = static_cast<uint64_t>(config.get_int(section, "capacity_bytes"));
    if (m.drives == 0 || m.servers == 0 || m.servers > m.drives) {
      raise(Errc::kSpecInvalid, "model " + m.model + ": need 0 < servers <= drives");
    }
    if (m.streaming_rate_bytes_per_s <= 0 || m.mount_seconds < 0 || m.position_seconds_per_fseq < 0 ||
        m.capacity_bytes == 0) {
      raise(Errc::kSpecInvalid, "model " + m.model + ": rates and capacity must be positive");
    }
    plant.models.push_back(m);
  }
  for (const auto& section : config.sections_with_prefix("pool.")) {
    PoolSpec p;
    p.pool.name = section.substr(5);
    p.pool.uid = static_cast<uint32_t>(config.get_int(section, "uid", 0));
    p.pool.gid = static_cast<uint32_t>(config.get_int(section, "gid", 0));
    p.model = config.get_string(section, "model");
    p.vid_prefix = config.get_string(section, "vid_prefix");
    p.count = static_cast<uint32_t>(config.get_int(section, "count", 0));
    p.capacity_bytes = static_cast<uint64_t>(config.get_int(section, "capacity_bytes", 0));
    plant.model(p.model);
    plant.pools.push_back(p);
  }
  if (config.has_section("compat")) {
    for (const auto& m : plant.models) {
      for (const auto& media : config.get_strings("compat", m.model)) plant.reads[m.model].insert(media);
    }
  }
  plant.unmount_fraction = config.get_double("plant", "unmount_fraction", plant.unmount_fraction);
  plant.reserve_fraction = config.get_double("plant", "reserve_fraction", plant.reserve_fraction);
  return plant;
}

Plant load_plant_file(const std::filesystem::path& path) { return load_plant(Config::load(path)); }

}  // namespace castor::vmgr
