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

#include "castor/vmgr/registry.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace castor::vmgr {

Registry::Registry(RegistryOptions options) : options_(std::move(options)) {
  if (options_.reserve_fraction < 0 || options_.reserve_fraction >= 1) {
    raise(Errc::kInvalidArgument, "reserve fraction must be in [0, 1)");
  }
  if (!options_.journal_dir.empty()) {
    journal_ = std::make_unique<Journal>(options_.journal_dir, options_.journal);
    journal_->recover([this](const Json& s) { load(s); }, [this](const Json& r) { apply(r); });
  }
}

Registry::~Registry() = default;

uint64_t Registry::reserve_bytes(const TapeVolume& v) const {
  return static_cast<uint64_t>(std::floor(static_cast<double>(v.capacity_bytes) * options_.reserve_fraction));
}

TapeVolume& Registry::volume(const std::string& vid) {
  auto it = volumes_.find(vid);
  if (it == volumes_.end()) raise(Errc::kNotFound, "no volume " + vid);
  return it->second;
}

const TapeVolume& Registry::volume(const std::string& vid) const {
  auto it = volumes_.find(vid);
  if (it == volumes_.end()) raise(Errc::kNotFound, "no volume " + vid);
  return it->second;
}

void Registry::unindex(const TapeVolume& v) { pools_.at(v.pool).eligible.erase({v.free_bytes, v.vid}); }

void Registry::index(const TapeVolume& v) {
  if ((v.status & kIneligible) == 0) pools_.at(v.pool).eligible.emplace(v.free_bytes, v.vid);
}

void Registry::commit(const Json& record) {
  if (journal_) journal_->append(record);
  apply(record);
  if (journal_ && journal_->snapshot_due()) journal_->write_snapshot(state());
}

void Registry::apply(const Json& r) {
  const std::string t = r.at("t").get<std::string>();
  if (t == "add_pool") {
    TapePool p = r.at("pool").get<TapePool>();
    p.vids.clear();
    pools_[p.name].pool = p;
    return;
  }
  if (t == "add_vol") {
    const TapeVolume v = r.at("vol").get<TapeVolume>();
    if (!pools_.count(v.pool)) pools_[v.pool].pool.name = v.pool;
    pools_[v.pool].pool.vids.push_back(v.vid);
    volumes_[v.vid] = v;
    index(v);
    return;
  }
  TapeVolume& v = volume(r.at("vid").get<std::string>());
  unindex(v);
  if (t == "status") {
    v.status = r.at("flags").get<uint32_t>();
  } else if (t == "busy") {
    v.status |= kBusy;
  } else if (t == "write") {
    const uint64_t bytes = r.at("bytes").get<uint64_t>();
    const uint32_t files = r.at("files").get<uint32_t>();
    v.free_bytes -= bytes;
    v.next_fseq += files;
    if (bytes > 0 || files > 0) v.status &= ~kFree;
    if (!r.at("keep_busy").get<bool>()) v.status &= ~kBusy;
    if (v.free_bytes <= reserve_bytes(v)) v.status |= kFull;
  } else if (t == "release") {
    v.status &= ~kBusy;
  } else {
    raise(Errc::kInternal, "unknown vmgr journal record " + t);
  }
  index(v);
}

Json Registry::state() const {
  Json pools = Json::array();
  for (const auto& [name, p] : pools_) pools.push_back(p.pool);
  Json vols = Json::array();
  for (const auto& [vid, v] : volumes_) vols.push_back(v);
  return Json{{"pools", pools}, {"volumes", vols}};
}

void Registry::load(const Json& s) {
  pools_.clear();
  volumes_.clear();
  for (const auto& p : s.at("pools")) {
    TapePool pool = p.get<TapePool>();
    pools_[pool.name].pool = pool;
  }
  for (const auto& j : s.at("volumes")) {
    TapeVolume v = j.get<TapeVolume>();
    volumes_[v.vid] = v;
    index(v);
  }
}

void Registry::add_pool(const TapePool& pool) {
  if (pool.name.empty()) raise(Errc::kInvalidArgument, "pool needs a name");
  std::unique_lock lock(mu_);
  if (pools_.count(pool.name)) raise(Errc::kExists, "pool " + pool.name);
  commit(Json{{"t", "add_pool"}, {"pool", pool}});
}

void Registry::add_volume(TapeVolume v) {
  if (!valid_vid(v.vid)) raise(Errc::kInvalidArgument, "vid '" + v.vid + "' is not 6 uppercase alphanumerics");
  if (v.pool.empty() || v.model.empty()) raise(Errc::kInvalidArgument, "volume needs a pool and a model");
  if (v.capacity_bytes == 0 || v.free_bytes > v.capacity_bytes) {
    raise(Errc::kInvalidArgument, "volume " + v.vid + " needs 0 < capacity and free <= capacity");
  }
  if (v.next_fseq == 0) raise(Errc::kInvalidArgument, "next_fseq is 1-based");
  std::unique_lock lock(mu_);
  if (volumes_.count(v.vid)) raise(Errc::kExists, "volume " + v.vid);
  commit(Json{{"t", "add_vol"}, {"vol", v}});
}

bool Registry::ensure_volume(const TapeVolume& v) {
  try {
    add_volume(v);
    return true;
  } catch (const CastorError& e) {
    if (e.code() != Errc::kExists) throw;
    return false;
  }
}

void Registry::set_status(const std::string& vid, uint32_t flags) {
  if (flags & ~(kFree | kIneligible)) raise(Errc::kInvalidArgument, "unknown status bits");
  std::unique_lock lock(mu_);
  volume(vid);
  commit(Json{{"t", "status"}, {"vid", vid}, {"flags", flags}});
}

TapeVolume Registry::query(const std::string& vid) const {
  std::shared_lock lock(mu_);
  return volume(vid);
}

std::vector<TapeVolume> Registry::list(const std::string& pool) const {
  std::shared_lock lock(mu_);
  std::vector<TapeVolume> out;
  if (pool.empty()) {
    for (const auto& [vid, v] : volumes_) out.push_back(v);
  } else {
    auto it = pools_.find(pool);
    if (it == pools_.end()) raise(Errc::kNotFound, "no pool " + pool);
    for (const auto& vid : it->second.pool.vids) out.push_back(volumes_.at(vid));
  }
  std::sort(out.begin(), out.end(), [](const TapeVolume& a, const TapeVolume& b) { return a.vid < b.vid; });
  return out;
}

std::vector<TapePool> Registry::pools() const {
  std::shared_lock lock(mu_);
  std::vector<TapePool> out;
  for (const auto& [name, p] : pools_) out.push_back(p.pool);
  return out;
}

TapeVolume Registry::select_tape_for_migration(const std::string& pool, uint64_t requested_bytes,
                                               const std::vector<std::string>& exclude_vids) {
  std::unique_lock lock(mu_);
  auto p = pools_.find(pool);
  if (p == pools_.end()) raise(Errc::kNotFound, "no pool " + pool);
  const auto& eligible = p->second.eligible;
  for (auto it = eligible.lower_bound({requested_bytes, std::string()}); it != eligible.end(); ++it) {
    if (std::find(exclude_vids.begin(), exclude_vids.end(), it->second) != exclude_vids.end()) continue;
    const std::string vid = it->second;
    commit(Json{{"t", "busy"}, {"vid", vid}});
    return volumes_.at(vid);
  }
  raise(Errc::kNoEligibleVolume,
        "pool " + pool + " has no eligible volume with " + std::to_string(requested_bytes) + " bytes free");
}

void Registry::update_after_write(const std::string& vid, uint64_t bytes_written, uint32_t files_written,
                                  bool keep_busy) {
  std::unique_lock lock(mu_);
  const TapeVolume& v = volume(vid);
  if (bytes_written > v.free_bytes) {
    raise(Errc::kUnderflow, vid + ": writing " + std::to_string(bytes_written) + " bytes with " +
                                std::to_string(v.free_bytes) + " free");
  }
  commit(Json{{"t", "write"}, {"vid", vid}, {"bytes", bytes_written}, {"files", files_written}, {"keep_busy", keep_busy}});
}

void Registry::release(const std::string& vid) {
  std::unique_lock lock(mu_);
  volume(vid);
  commit(Json{{"t", "release"}, {"vid", vid}});
}

size_t Registry::volume_count() const {
  std::shared_lock lock(mu_);
  return volumes_.size();
}

}  // namespace castor::vmgr
