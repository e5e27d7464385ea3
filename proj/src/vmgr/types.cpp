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

#include "castor/vmgr/types.hpp"

#include <array>
#include <utility>

namespace castor::vmgr {

namespace {

constexpr std::array<std::pair<uint32_t, const char*>, 6> kFlagNames{{
    {kFree, "FREE"},
    {kBusy, "BUSY"},
    {kFull, "FULL"},
    {kRdonly, "RDONLY"},
    {kDisabled, "DISABLED"},
    {kExported, "EXPORTED"},
}};

}  // namespace

std::vector<std::string> flag_names(uint32_t flags) {
  std::vector<std::string> out;
  for (const auto& [bit, name] : kFlagNames) {
    if (flags & bit) out.emplace_back(name);
  }
  return out;
}

uint32_t parse_flags(const std::vector<std::string>& names) {
  uint32_t flags = 0;
  for (const auto& n : names) {
    bool known = false;
    for (const auto& [bit, name] : kFlagNames) {
      if (n == name) {
        flags |= bit;
        known = true;
      }
    }
    if (!known) raise(Errc::kInvalidArgument, "unknown volume flag '" + n + "'");
  }
  return flags;
}

bool valid_vid(std::string_view vid) {
  if (vid.size() != 6) return false;
  for (char c : vid) {
    if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))) return false;
  }
  return true;
}

void to_json(Json& j, const TapeVolume& v) {
  j = Json{{"vid", v.vid},
           {"pool", v.pool},
           {"model", v.model},
           {"capacity_bytes", v.capacity_bytes},
           {"free_bytes", v.free_bytes},
           {"next_fseq", v.next_fseq},
           {"status", flag_names(v.status)}};
}

void from_json(const Json& j, TapeVolume& v) {
  v.vid = j.at("vid").get<std::string>();
  v.pool = j.at("pool").get<std::string>();
  v.model = j.at("model").get<std::string>();
  v.capacity_bytes = j.at("capacity_bytes").get<uint64_t>();
  v.free_bytes = j.value("free_bytes", v.capacity_bytes);
  v.next_fseq = j.value("next_fseq", uint32_t{1});
  v.status = j.contains("status") ? parse_flags(j["status"].get<std::vector<std::string>>()) : uint32_t{kFree};
}

void to_json(Json& j, const TapePool& p) { j = Json{{"name", p.name}, {"uid", p.uid}, {"gid", p.gid}, {"vids", p.vids}}; }

void from_json(const Json& j, TapePool& p) {
  p.name = j.at("name").get<std::string>();
  p.uid = j.value("uid", uint32_t{0});
  p.gid = j.value("gid", uint32_t{0});
  p.vids = j.value("vids", std::vector<std::string>{});
}

void to_json(Json& j, const DrivePlantModel& m) {
  j = Json{{"model", m.model},
           {"drives", m.drives},
           {"servers", m.servers},
           {"streaming_rate_bytes_per_s", m.streaming_rate_bytes_per_s},
           {"mount_seconds", m.mount_seconds},
           {"position_seconds_per_fseq", m.position_seconds_per_fseq},
           {"capacity_bytes", m.capacity_bytes}};
}

void from_json(const Json& j, DrivePlantModel& m) {
  m.model = j.at("model").get<std::string>();
  m.drives = j.at("drives").get<uint32_t>();
  m.servers = j.at("servers").get<uint32_t>();
  m.streaming_rate_bytes_per_s = j.at("streaming_rate_bytes_per_s").get<double>();
  m.mount_seconds = j.at("mount_seconds").get<double>();
  m.position_seconds_per_fseq = j.at("position_seconds_per_fseq").get<double>();
  m.capacity_bytes = j.at("capacity_bytes").get<uint64_t>();
}

}  // namespace castor::vmgr
