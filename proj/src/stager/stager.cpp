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

#include "castor/stager/stager.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>

#include "castor/common/error.hpp"

namespace castor::stager {

namespace {

bool is_ours(const std::string& name) {
  if (name.rfind("repack.", 0) == 0) return true;
  return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::vector<ns::Segment> copy_segments(const std::vector<ns::Segment>& all, uint32_t copy_no) {
  std::vector<ns::Segment> out;
  for (const auto& s : all) {
    if (s.copy_no == copy_no) out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.seg_seq < b.seg_seq; });
  return out;
}

std::map<uint32_t, uint64_t> copy_sums(const std::vector<ns::Segment>& all) {
  std::map<uint32_t, uint64_t> sums;
  for (const auto& s : all) sums[s.copy_no] += s.seg_size;
  return sums;
}

}  // namespace

Stager::Stager(StagerOptions options)
    : options_(std::move(options)),
      ns_(options_.ns_routes, options_.connector),
      vmgr_(options_.connector->connect(options_.vmgr_address)),
      vdqm_(options_.connector->connect(options_.vdqm_address)) {
  if (options_.pools.empty()) raise(Errc::kSpecInvalid, "stager needs at least one disk pool");
  for (auto& p : options_.pools) {
    p.validate();
    for (auto& f : p.filesystems) f.used_bytes = 0;
    if (pools_.count(p.name)) raise(Errc::kSpecInvalid, "disk pool " + p.name + " defined twice");
    pool_order_.push_back(p.name);
    pools_.emplace(p.name, p);
  }
  now_ = options_.start_us;
  sync_wall_locked();
  recover();
}

Stager::~Stager() { stop_background(); }

// ---- time and events ----

void Stager::sync_wall_locked() {
  if (options_.wall != nullptr) now_ = std::max(now_, options_.wall->now_us());
}

void Stager::schedule(Event e) {
  e.seq = ++event_seq_;
  events_.push(std::move(e));
}

bool Stager::step_locked() {
  if (events_.empty()) return false;
  Event e = events_.top();
  events_.pop();
  now_ = std::max(now_, e.t);
  if (e.is_write) {
    on_write_done(e);
  } else {
    on_read_done(e);
  }
  pump_locked();
  cv_.notify_all();
  return true;
}

void Stager::pump_locked() {
  poll_assignments_locked();
  check_triggers_locked();
  poll_assignments_locked();
}

void Stager::wait_locked(std::unique_lock<std::mutex>& lock, const std::function<bool()>& done) {
  auto deadline = std::chrono::steady_clock::now() + options_.block_timeout;
  while (!done()) {
    if (step_locked()) {
      deadline = std::chrono::steady_clock::now() + options_.block_timeout;
      continue;
    }
    pump_locked();
    if (done() || !events_.empty()) continue;
    if (std::chrono::steady_clock::now() > deadline) raise(Errc::kEnvironmentDown, "stager made no progress");
    cv_.wait_for(lock, std::chrono::milliseconds(10));
    sync_wall_locked();
  }
}

int64_t Stager::now_us() const {
  std::lock_guard lock(mu_);
  return now_;
}

int64_t Stager::next_event_us() const {
  std::lock_guard lock(mu_);
  return events_.empty() ? INT64_MAX : events_.top().t;
}

void Stager::advance_to(int64_t t_us) {
  std::lock_guard lock(mu_);
  sync_wall_locked();
  pump_locked();
  while (!events_.empty() && events_.top().t <= t_us) step_locked();
  now_ = std::max(now_, t_us);
  pump_locked();
}

bool Stager::idle() const {
  std::lock_guard lock(mu_);
  return events_.empty() && batches_.empty() && reads_.empty();
}

void Stager::run_until_idle() {
  std::unique_lock lock(mu_);
  wait_locked(lock, [this] { return events_.empty() && batches_.empty() && reads_.empty(); });
}

void Stager::start_background(std::chrono::milliseconds period) {
  std::lock_guard lock(mu_);
  if (background_.joinable()) return;
  stop_ = false;
  background_ = std::thread([this, period] {
    std::unique_lock lock(mu_);
    while (!stop_) {
      try {
        sync_wall_locked();
        while (step_locked()) {
        }
        pump_locked();
      } catch (const std::exception& e) {
        spdlog::warn("stager background: {}", e.what());
      }
      cv_.wait_for(lock, period);
    }
  });
}

void Stager::stop_background() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  cv_.notify_all();
  if (background_.joinable()) background_.join();
}

// ---- peers ----

std::string Stager::address_of(const std::string& server) const {
  auto it = options_.disk_addresses.find(server);
  if (it != options_.disk_addresses.end()) return it->second;
  it = options_.disk_addresses.find("*");
  if (it != options_.disk_addresses.end()) return it->second;
  return server;
}

rfio::DiskClient& Stager::disk_for(const std::string& address) {
  auto& slot = disks_[address];
  if (!slot) slot = std::make_unique<rfio::DiskClient>(options_.connector->connect(address));
  return *slot;
}

mover::MoverClient& Stager::mover_for(const std::string& drive) {
  if (!drive_servers_.count(drive)) {
    for (const auto& d : vdqm_.queue_snapshot().drives) drive_servers_[d.drive_name] = d.server_name;
  }
  const std::string server = drive_servers_.count(drive) ? drive_servers_[drive] : std::string();
  auto it = options_.mover_addresses.find(server);
  if (it == options_.mover_addresses.end()) it = options_.mover_addresses.find("*");
  if (it == options_.mover_addresses.end()) raise(Errc::kNotFound, "no mover serves drive " + drive);
  auto& slot = movers_[it->second];
  if (!slot) slot = std::make_unique<mover::MoverClient>(options_.connector->connect(it->second));
  return *slot;
}

std::string Stager::copy_path(const FileSystem& fs, uint64_t file_id) const {
  return fs.mount + "/" + std::to_string(file_id);
}

// ---- placement and accounting ----

DiskPool& Stager::pool_locked(const std::string& name) {
  auto it = pools_.find(name.empty() ? pool_order_.front() : name);
  if (it == pools_.end()) raise(Errc::kNotFound, "no disk pool " + name);
  return it->second;
}

const DiskPool& Stager::pool_locked(const std::string& name) const {
  auto it = pools_.find(name.empty() ? pool_order_.front() : name);
  if (it == pools_.end()) raise(Errc::kNotFound, "no disk pool " + name);
  return it->second;
}

FileSystem* Stager::place_locked(DiskPool& pool, uint64_t bytes) {
  FileSystem* best = nullptr;
  for (auto& f : pool.filesystems) {
    if (best == nullptr || f.free_bytes() > best->free_bytes() ||
        (f.free_bytes() == best->free_bytes() && std::tie(f.server, f.mount) < std::tie(best->server, best->mount))) {
      best = &f;
    }
  }
  return best != nullptr && best->free_bytes() >= bytes ? best : nullptr;
}

FileSystem& Stager::fs_of(DiskPool& pool, const std::string& server, const std::string& mount) {
  for (auto& f : pool.filesystems) {
    if (f.server == server && f.mount == mount) return f;
  }
  raise(Errc::kNotFound, "pool " + pool.name + " has no filesystem " + server + ":" + mount);
}

void Stager::charge(const DiskCopy& c, int64_t sign) {
  auto& f = fs_of(pool_locked(c.pool), c.server, c.mount);
  const uint64_t bytes = c.charged_bytes();
  if (sign > 0) {
    f.used_bytes += bytes;
  } else {
    f.used_bytes = f.used_bytes >= bytes ? f.used_bytes - bytes : 0;
  }
}

void Stager::set_copy(DiskCopy c) {
  if (auto it = copies_.find(c.file_id); it != copies_.end()) charge(it->second, -1);
  commit(Json{{"t", "copy"}, {"c", c}});
  charge(copies_.at(c.file_id), +1);
}

void Stager::change_state(DiskCopy& c, CopyState to) {
  if (!legal_transition(c.state, to)) {
    raise(Errc::kIllegalTransition,
          std::string(state_name(c.state)) + " -> " + std::string(state_name(to)) + " for " + std::to_string(c.file_id));
  }
  c.state = to;
}

void Stager::drop_copy(uint64_t file_id, bool remove_file) {
  auto it = copies_.find(file_id);
  if (it == copies_.end()) return;
  const DiskCopy c = it->second;
  charge(c, -1);
  commit(Json{{"t", "drop"}, {"id", file_id}});
  for (auto w = writes_.begin(); w != writes_.end();) {
    if (w->first.first == file_id && w->second.kind == TaskKind::kMigrate && w->second.batch == 0) {
      w = writes_.erase(w);
    } else {
      ++w;
    }
  }
  if (remove_file) {
    try {
      disk_for(address_of(c.server)).remove(c.path);
    } catch (const std::exception& e) {
      spdlog::warn("removing {}: {}", c.path, e.what());
    }
  }
}

GcReport Stager::gc_locked(DiskPool& pool, bool force, uint64_t need_bytes) {
  GcReport report;
  if (!force && pool.used_fraction() <= pool.gc_high_watermark) return report;
  std::vector<std::pair<int64_t, uint64_t>> candidates;
  for (const auto& [id, c] : copies_) {
    if (c.pool == pool.name && c.state == CopyState::kStaged && !c.writing) candidates.emplace_back(c.last_access_us, id);
  }
  std::sort(candidates.begin(), candidates.end());
  const double target = pool.gc_low_watermark * static_cast<double>(pool.capacity());
  for (const auto& [t, id] : candidates) {
    // A placement evicts until the request fits, a sweep until the low mark.
    if (force ? place_locked(pool, need_bytes) != nullptr : static_cast<double>(pool.used()) <= target) break;
    report.freed_bytes += copies_.at(id).charged_bytes();
    drop_copy(id, true);
    ++report.evicted_files;
    ++stats_.gc_evictions;
  }
  return report;
}

// ---- client operations ----

Location Stager::stage_out(const std::string& path, uint64_t size_hint, const std::string& pool_name) {
  std::lock_guard lock(mu_);
  sync_wall_locked();
  DiskPool& pool = pool_locked(pool_name);
  ns::NsEntry entry;
  try {
    entry = ns_.stat(path);
  } catch (const CastorError& e) {
    if (e.code() != Errc::kNotFound) throw;
    ns_.create_file(path);
    entry = ns_.stat(path);
  }
  if (entry.is_dir()) raise(Errc::kIsADirectory, path);
  if (auto it = copies_.find(entry.file_id); it != copies_.end()) {
    const DiskCopy& old = it->second;
    if (old.writing) {
      // Without a live writer at the disk server the earlier stage_out was
      // abandoned and this one starts the file over.
      rfio::DiskSession(options_.connector->connect(address_of(old.server)), old.path, rfio::OpenMode::kWriteTruncate)
          .close();
    } else if (old.state != CopyState::kStaged) {
      raise(Errc::kBusy, path + " is " + std::string(state_name(old.state)));
    }
    drop_copy(entry.file_id, true);
  }
  FileSystem* fs = place_locked(pool, size_hint);
  if (fs == nullptr) {
    gc_locked(pool, true, size_hint);
    fs = place_locked(pool, size_hint);
  }
  if (fs == nullptr) raise(Errc::kNoSpace, "pool " + pool.name + " cannot hold " + std::to_string(size_hint) + " bytes");
  DiskCopy c;
  c.file_id = entry.file_id;
  c.pool = pool.name;
  c.server = fs->server;
  c.mount = fs->mount;
  c.path = copy_path(*fs, entry.file_id);
  c.state = CopyState::kToMigrate;
  c.writing = true;
  c.reserved_bytes = size_hint;
  c.last_access_us = now_;
  c.to_migrate_since_us = now_;
  rfio::DiskSession(options_.connector->connect(address_of(c.server)), c.path, rfio::OpenMode::kWriteTruncate).close();
  set_copy(c);
  return Location{c.file_id, c.server, address_of(c.server), c.path, false};
}

fileio::Digest Stager::put_done(const std::string& path) {
  std::lock_guard lock(mu_);
  sync_wall_locked();
  const ns::NsEntry entry = ns_.stat(path);
  auto it = copies_.find(entry.file_id);
  if (it == copies_.end() || !it->second.writing) raise(Errc::kNotOpenForWrite, path + " has no pending stage_out");
  DiskCopy c = it->second;
  const fileio::Digest d = disk_for(address_of(c.server)).checksum(c.path);
  for (const auto& [copy_no, sum] : copy_sums(ns_.get_segments(entry.file_id))) {
    ns_.replace_segments(entry.file_id, copy_no, {});
  }
  ns_.set_file_size(entry.file_id, d.size, d.crc32);
  c.writing = false;
  c.reserved_bytes = 0;
  c.size_bytes = d.size;
  c.crc32 = d.crc32;
  c.last_access_us = now_;
  c.to_migrate_since_us = now_;
  c.copies_complete = 0;
  c.copy_vids.clear();
  // Empty files need no tape copy.
  c.state = d.size == 0 ? CopyState::kStaged : CopyState::kToMigrate;
  set_copy(c);
  if (c.state == CopyState::kToMigrate) add_migrate_task(c);
  pump_locked();
  gc_locked(pool_locked(c.pool), false);
  return d;
}

Location Stager::stage_in(const std::string& path, bool wait, const std::string& pool_name) {
  std::unique_lock lock(mu_);
  sync_wall_locked();
  const ns::NsEntry entry = ns_.stat(path);
  if (entry.is_dir()) raise(Errc::kIsADirectory, path);
  const uint64_t id = entry.file_id;
  std::shared_ptr<RecallOutcome> outcome;
  if (auto it = copies_.find(id); it != copies_.end()) {
    DiskCopy c = it->second;
    if (c.writing) return Location{id, c.server, address_of(c.server), c.path, false};
    if (c.state == CopyState::kStaged || c.state == CopyState::kToMigrate || c.state == CopyState::kMigrating) {
      ++stats_.cache_hits;
      c.last_access_us = now_;
      set_copy(c);
      return Location{id, c.server, address_of(c.server), c.path, false};
    }
    outcome = reads_.at(recall_of_file_.at(id)).outcome;
  } else {
    ++stats_.cache_misses;
    DiskPool& pool = pool_locked(pool_name);
    const auto segments = ns_.get_segments(id);
    std::optional<uint32_t> chosen;
    uint32_t complete = 0;
    for (const auto& [copy_no, sum] : copy_sums(segments)) {
      if (sum != entry.size_bytes) continue;
      ++complete;
      if (!chosen) chosen = copy_no;
    }
    if (!chosen && entry.size_bytes != 0) raise(Errc::kNoTapeCopy, path + " has no complete copy");
    FileSystem* fs = place_locked(pool, entry.size_bytes);
    if (fs == nullptr) {
      gc_locked(pool, true, entry.size_bytes);
      fs = place_locked(pool, entry.size_bytes);
    }
    if (fs == nullptr) raise(Errc::kNoSpace, "pool " + pool.name + " cannot hold " + path);
    DiskCopy c;
    c.file_id = id;
    c.pool = pool.name;
    c.server = fs->server;
    c.mount = fs->mount;
    c.path = copy_path(*fs, id);
    c.size_bytes = entry.size_bytes;
    c.crc32 = entry.checksum.value_or(0);
    c.last_access_us = now_;
    c.copies_complete = complete;
    auto& disk = disk_for(address_of(c.server));
    disk.remove(c.path);
    if (entry.size_bytes == 0) {
      rfio::DiskSession(options_.connector->connect(address_of(c.server)), c.path, rfio::OpenMode::kWriteTruncate)
          .close();
      c.state = CopyState::kStaged;
      set_copy(c);
      return Location{id, c.server, address_of(c.server), c.path, false};
    }
    c.state = CopyState::kRecallPending;
    set_copy(c);
    ReadTask r;
    r.id = next_id_++;
    r.purpose = ReadPurpose::kStage;
    r.file_id = id;
    r.copy_no = *chosen;
    r.segments = copy_segments(segments, *chosen);
    r.address = address_of(c.server);
    r.path = c.path;
    r.size = entry.size_bytes;
    r.checksum = entry.checksum;
    r.outcome = outcome = std::make_shared<RecallOutcome>();
    reads_[r.id] = r;
    recall_of_file_[id] = r.id;
    start_read(reads_.at(r.id));
    pump_locked();
  }
  if (!wait) {
    const DiskCopy& c = copies_.at(id);
    return Location{id, c.server, address_of(c.server), c.path, !outcome->done};
  }
  wait_locked(lock, [&] { return outcome->done; });
  if (!outcome->error.empty()) raise(Errc::kRecallFailed, outcome->error);
  const DiskCopy& c = copies_.at(id);
  return Location{id, c.server, address_of(c.server), c.path, false};
}

std::vector<DiskCopy> Stager::query(const std::string& pool) const {
  std::lock_guard lock(mu_);
  std::vector<DiskCopy> out;
  for (const auto& [id, c] : copies_) {
    if (pool.empty() || c.pool == pool) out.push_back(c);
  }
  return out;
}

std::optional<DiskCopy> Stager::copy_of(uint64_t file_id) const {
  std::lock_guard lock(mu_);
  auto it = copies_.find(file_id);
  if (it == copies_.end()) return std::nullopt;
  return it->second;
}

std::vector<DiskPool> Stager::pools() const {
  std::lock_guard lock(mu_);
  std::vector<DiskPool> out;
  for (const auto& name : pool_order_) out.push_back(pools_.at(name));
  return out;
}

StagerStats Stager::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

std::vector<TransferRecord> Stager::transfers() const {
  std::lock_guard lock(mu_);
  return transfers_;
}

std::vector<int64_t> Stager::queue_waits_us() const {
  std::lock_guard lock(mu_);
  return queue_waits_;
}

std::vector<std::string> Stager::check_invariants() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  std::map<std::pair<std::string, std::string>, uint64_t> expected;
  for (const auto& [id, c] : copies_) {
    expected[{c.server, c.mount}] += c.charged_bytes();
    if (c.writing && c.state != CopyState::kToMigrate) out.push_back(std::to_string(id) + " open for write in " + std::string(state_name(c.state)));
    if (c.state == CopyState::kStaged && c.size_bytes > 0 && c.copies_complete == 0) {
      out.push_back(std::to_string(id) + " STAGED without a tape copy");
    }
    if (c.state == CopyState::kInvalid) out.push_back(std::to_string(id) + " INVALID copy kept");
  }
  for (const auto& [rid, job] : repacks_) {
    for (const auto& [id, s] : job.scratch) expected[{s.server, s.mount}] += s.charged_bytes();
  }
  for (const auto& [name, pool] : pools_) {
    for (const auto& f : pool.filesystems) {
      const uint64_t want = expected[{f.server, f.mount}];
      if (f.used_bytes != want) {
        out.push_back(f.server + ":" + f.mount + " used " + std::to_string(f.used_bytes) + " != " + std::to_string(want));
      }
    }
  }
  return out;
}

GcReport Stager::run_gc(const std::string& pool) {
  std::lock_guard lock(mu_);
  sync_wall_locked();
  return gc_locked(pool_locked(pool), false);
}

GcReport Stager::purge(const std::string& path) {
  std::lock_guard lock(mu_);
  const ns::NsEntry entry = ns_.stat(path);
  GcReport report;
  auto it = copies_.find(entry.file_id);
  if (it == copies_.end()) return report;
  if (it->second.state != CopyState::kStaged || it->second.writing) {
    raise(Errc::kBusy, path + " is " + std::string(state_name(it->second.state)));
  }
  report.evicted_files = 1;
  report.freed_bytes = it->second.charged_bytes();
  drop_copy(entry.file_id, true);
  ++stats_.gc_evictions;
  return report;
}

// ---- migration ----

void Stager::add_migrate_task(const DiskCopy& c) {
  const DiskPool& pool = pool_locked(c.pool);
  WriteTask t;
  t.kind = TaskKind::kMigrate;
  t.file_id = c.file_id;
  t.copy_no = c.copies_complete + 1;
  t.disk_pool = c.pool;
  t.tape_pool = pool.tape_pool;
  t.address = address_of(c.server);
  t.path = c.path;
  t.size = c.size_bytes;
  t.checksum = c.crc32;
  t.exclude_vids = c.copy_vids;
  t.since_us = c.to_migrate_since_us;
  writes_[{t.file_id, t.copy_no}] = t;
}

uint32_t Stager::streams_for(const std::string& tape_pool) const {
  uint32_t n = 0;
  for (const auto& [name, p] : pools_) {
    if (p.tape_pool == tape_pool) n = std::max(n, p.migration_streams);
  }
  return n == 0 ? 4 : n;
}

bool Stager::pool_triggered(const DiskPool& pool) const {
  uint64_t pending = 0;
  for (const auto& [key, t] : writes_) {
    if (t.kind != TaskKind::kMigrate || t.disk_pool != pool.name || t.batch != 0) continue;
    pending += t.size - t.done;
    if (now_ - t.since_us >= seconds_to_us(pool.migration_max_age_s)) return true;
  }
  return pending > 0 && pending >= pool.migration_threshold_bytes;
}

void Stager::check_triggers_locked() {
  std::set<std::string> tape_pools;
  for (const auto& [key, t] : writes_) {
    if (t.batch == 0 && t.failures < 3) tape_pools.insert(t.tape_pool);
  }
  for (const auto& tp : tape_pools) start_batches_locked(tp, true);
}

bool Stager::eligible_for(const WriteTask& t, const Batch& b) const {
  if (t.tape_pool != b.tape_pool || t.failures >= 3) return false;
  if (std::find(t.exclude_vids.begin(), t.exclude_vids.end(), b.vid) != t.exclude_vids.end()) return false;
  if (t.kind == TaskKind::kMigrate) {
    auto it = copies_.find(t.file_id);
    if (it == copies_.end() || it->second.writing || it->second.state != CopyState::kToMigrate) return false;
  }
  return true;
}

size_t Stager::start_batches_locked(const std::string& tape_pool, bool only_triggered) {
  if (auto it = no_volume_until_.find(tape_pool); it != no_volume_until_.end() && it->second > now_) return 0;
  size_t active = 0;
  for (const auto& [id, b] : batches_) active += b.tape_pool == tape_pool ? 1 : 0;
  const size_t limit = streams_for(tape_pool);
  size_t started = 0;
  std::vector<TaskKey> keys;
  for (const auto& [key, t] : writes_) keys.push_back(key);
  for (const auto& key : keys) {
    if (active >= limit) break;
    auto tit = writes_.find(key);
    if (tit == writes_.end()) continue;
    WriteTask& t = tit->second;
    if (t.batch != 0 || t.failures >= 3 || t.tape_pool != tape_pool) continue;
    if (t.kind == TaskKind::kMigrate) {
      auto cit = copies_.find(t.file_id);
      if (cit == copies_.end() || cit->second.writing || cit->second.state != CopyState::kToMigrate) continue;
      if (only_triggered && (!options_.auto_migrate || !pool_triggered(pool_locked(t.disk_pool)))) continue;
    }
    std::vector<std::string> exclude = t.exclude_vids;
    for (const auto& [vid, owner] : vids_in_use_) exclude.push_back(vid);
    const uint64_t remaining = t.size - t.done;
    vmgr::TapeVolume vol;
    try {
      try {
        vol = vmgr_.select_tape_for_migration(tape_pool, remaining, exclude);
      } catch (const CastorError& e) {
        if (e.code() != Errc::kNoEligibleVolume) throw;
        // Nothing holds the whole file: start it on the emptiest volume and
        // let it continue on the next one.
        uint64_t best = 0;
        for (const auto& v : vmgr_.list(tape_pool)) {
          if ((v.status & vmgr::kIneligible) != 0) continue;
          if (std::find(exclude.begin(), exclude.end(), v.vid) != exclude.end()) continue;
          best = std::max(best, v.free_bytes);
        }
        if (best == 0) throw;
        vol = vmgr_.select_tape_for_migration(tape_pool, best, exclude);
      }
    } catch (const CastorError& e) {
      last_migration_error_ = e.what();
      // Running batches free their volumes when they end.
      if (active > 0) break;
      no_volume_until_[tape_pool] = now_ + 60 * kMicrosPerSecond;
      // Repack work has nowhere to go.
      std::vector<std::pair<uint64_t, uint64_t>> doomed;
      for (const auto& [k, w] : writes_) {
        if (w.kind == TaskKind::kRepack && w.batch == 0 && w.tape_pool == tape_pool) doomed.emplace_back(w.repack_id, k.first);
      }
      for (const auto& [rid, fid] : doomed) {
        for (auto w = writes_.begin(); w != writes_.end(); ++w) {
          if (w->second.kind == TaskKind::kRepack && w->first.first == fid && w->second.repack_id == rid) {
            writes_.erase(w);
            break;
          }
        }
        if (auto r = repacks_.find(rid); r != repacks_.end()) repack_file_failed(r->second, fid, e.what());
      }
      break;
    }
    Batch b;
    b.id = next_id_++;
    b.tape_pool = tape_pool;
    b.vid = vol.vid;
    b.model = vol.model;
    b.capacity = vol.capacity_bytes;
    b.free = vol.free_bytes;
    b.next_fseq = vol.next_fseq;
    b.claimed = key;
    t.batch = b.id;
    vids_in_use_[b.vid] = b.id;
    commit(Json{{"t", "vid_busy"}, {"vid", b.vid}});
    b.submit_us = now_;
    batches_[b.id] = b;
    try {
      batches_.at(b.id).req_id = vdqm_.submit_request(b.vid, vdqm::Access::kWrite, b.model, options_.client_name);
    } catch (const CastorError& e) {
      last_migration_error_ = e.what();
      end_batch(batches_.at(b.id));
      break;
    }
    ++active;
    ++started;
  }
  return started;
}

void Stager::start_next_write(Batch& b) {
  if (b.done || b.free == 0) {
    end_batch(b);
    return;
  }
  WriteTask* task = nullptr;
  if (b.claimed) {
    auto it = writes_.find(*b.claimed);
    if (it != writes_.end() && it->second.batch == b.id) task = &it->second;
    b.claimed.reset();
  }
  if (task == nullptr) {
    for (auto& [key, t] : writes_) {
      if (t.batch != 0 || !eligible_for(t, b)) continue;
      const uint64_t remaining = t.size - t.done;
      // Only the first file of a batch may be split across volumes.
      if (remaining <= b.free || b.files == 0) {
        task = &t;
        break;
      }
    }
  }
  if (task == nullptr) {
    end_batch(b);
    return;
  }
  WriteTask& t = *task;
  t.batch = b.id;
  const uint64_t len = std::min(t.size - t.done, b.free);
  if (t.kind == TaskKind::kMigrate) {
    DiskCopy c = copies_.at(t.file_id);
    change_state(c, CopyState::kMigrating);
    set_copy(c);
  }
  b.current = TaskKey{t.file_id, t.copy_no};
  b.cur_offset = t.done;
  b.cur_len = len;
  b.cur_fseq = b.next_fseq;
  b.busy = true;
  mover::TransferJob job;
  job.job_id = next_id_++;
  job.direction = mover::Direction::kDiskToTape;
  job.vid = b.vid;
  job.fseq = b.cur_fseq;
  job.size_bytes = len;
  if (t.done == 0 && len == t.size) job.expected_checksum = t.checksum;
  job.disk_server = t.address;
  job.disk_path = t.path;
  job.disk_offset = t.done;
  job.volume_capacity = b.capacity;
  ++stats_.migration_jobs;
  Event e;
  e.t = now_;
  e.is_write = true;
  e.owner = b.id;
  try {
    auto& m = mover_for(b.drive);
    m.sync_clock(b.drive, now_);
    e.report = m.run_job(b.drive, job);
    e.t = std::max(now_, e.report->end_us);
  } catch (const CastorError& ex) {
    e.code = ex.code();
    e.error = ex.what();
  }
  schedule(std::move(e));
}

void Stager::finish_copy(WriteTask& t, const std::string& vid) {
  (void)vid;
  DiskCopy c = copies_.at(t.file_id);
  const DiskPool& pool = pool_locked(c.pool);
  ++c.copies_complete;
  ++stats_.copies_migrated;
  const TaskKey key{t.file_id, t.copy_no};
  if (c.copies_complete >= pool.copies_required) {
    change_state(c, CopyState::kStaged);
    set_copy(c);
    writes_.erase(key);
  } else {
    change_state(c, CopyState::kToMigrate);
    set_copy(c);
    writes_.erase(key);
    add_migrate_task(c);
  }
}

void Stager::on_write_done(const Event& e) {
  auto bit = batches_.find(e.owner);
  if (bit == batches_.end()) return;
  Batch& b = bit->second;
  b.busy = false;
  const TaskKey key = *b.current;
  b.current.reset();
  auto tit = writes_.find(key);
  std::string error = e.error;
  Errc code = e.code;
  if (e.report && tit != writes_.end()) {
    WriteTask& t = tit->second;
    const uint64_t remaining = t.size - t.done;
    transfers_.push_back(TransferRecord{b.drive, b.vid, true, e.report->bytes, e.report->start_us, e.report->end_us,
                                        e.report->stream_s});
    try {
      vmgr_.update_after_write(b.vid, b.cur_len, 1, true);
      b.free -= std::min(b.free, b.cur_len);
      ++b.next_fseq;
      ++b.files;
      stats_.bytes_to_tape += b.cur_len;
      ns::Segment seg;
      seg.file_id = t.file_id;
      seg.copy_no = t.copy_no;
      seg.vid = b.vid;
      seg.fseq = b.cur_fseq;
      seg.seg_size = b.cur_len;
      seg.seg_checksum = e.report->crc32;
      if (t.kind == TaskKind::kMigrate) {
        ns_.add_segment(t.file_id, seg);
        DiskCopy c = copies_.at(t.file_id);
        if (std::find(c.copy_vids.begin(), c.copy_vids.end(), b.vid) == c.copy_vids.end()) c.copy_vids.push_back(b.vid);
        t.done += b.cur_len;
        t.batch = 0;
        if (t.done == t.size) {
          set_copy(c);
          finish_copy(t, b.vid);
        } else {
          change_state(c, CopyState::kToMigrate);
          set_copy(c);
        }
      } else {
        seg.seg_seq = static_cast<uint32_t>(t.segments.size() + 1);
        t.segments.push_back(seg);
        t.done += b.cur_len;
        t.batch = 0;
        if (t.done == t.size) {
          auto rit = repacks_.find(t.repack_id);
          const uint64_t fid = t.file_id;
          const auto segs = t.segments;
          const uint32_t copy_no = t.copy_no;
          writes_.erase(key);
          if (rit != repacks_.end()) {
            RepackJob& job = rit->second;
            try {
              ns_.replace_segments(fid, copy_no, segs);
              for (const auto& s : segs) job.new_vids.insert(s.vid);
              auto sc = job.scratch.find(fid);
              if (sc != job.scratch.end()) {
                job.report.bytes += sc->second.size_bytes;
                charge(sc->second, -1);
                try {
                  disk_for(address_of(sc->second.server)).remove(sc->second.path);
                } catch (const std::exception&) {
                }
                job.scratch.erase(sc);
              }
              ++job.report.files_moved;
              --job.outstanding;
            } catch (const CastorError& ex) {
              repack_file_failed(job, fid, ex.what());
            }
          }
        }
      }
      if (b.cur_len < remaining) b.done = true;  // split: the volume is used up
    } catch (const CastorError& ex) {
      if (ex.code() == Errc::kNotFound && tit != writes_.end() && writes_.count(key) &&
          writes_.at(key).kind == TaskKind::kMigrate) {
        // The file vanished from the namespace while being migrated.
        const uint64_t fid = key.first;
        writes_.erase(key);
        drop_copy(fid, true);
      } else {
        error = ex.what();
        code = ex.code();
      }
    }
  } else if (tit == writes_.end()) {
    error.clear();
  }
  if (!error.empty() && writes_.count(key)) {
    WriteTask& t = writes_.at(key);
    ++stats_.failed_jobs;
    ++t.failures;
    t.batch = 0;
    last_migration_error_ = error;
    spdlog::warn("tape write {} fseq {} failed: {}", b.vid, b.cur_fseq, error);
    if (t.kind == TaskKind::kMigrate) {
      DiskCopy c = copies_.at(t.file_id);
      if (c.state == CopyState::kMigrating) {
        change_state(c, CopyState::kToMigrate);
        set_copy(c);
      }
    } else if (t.failures >= 3) {
      const uint64_t fid = t.file_id;
      const uint64_t rid = t.repack_id;
      writes_.erase(key);
      if (auto r = repacks_.find(rid); r != repacks_.end()) repack_file_failed(r->second, fid, error);
    }
    (void)code;
    b.done = true;
  }
  start_next_write(b);
}

void Stager::end_batch(Batch& b) {
  const uint64_t id = b.id;
  try {
    if (b.running) {
      vdqm_.release_drive(b.drive, b.req_id);
    } else if (b.req_id != 0) {
      vdqm_.cancel(b.req_id);
    }
  } catch (const std::exception& e) {
    spdlog::warn("releasing drive for {}: {}", b.vid, e.what());
  }
  try {
    vmgr_.release(b.vid);
  } catch (const std::exception& e) {
    spdlog::warn("releasing {}: {}", b.vid, e.what());
  }
  if (b.claimed) {
    if (auto it = writes_.find(*b.claimed); it != writes_.end() && it->second.batch == id) it->second.batch = 0;
  }
  if (auto it = vids_in_use_.find(b.vid); it != vids_in_use_.end() && it->second == id) vids_in_use_.erase(it);
  commit(Json{{"t", "vid_free"}, {"vid", b.vid}});
  batches_.erase(id);
}

MigrationReport Stager::run_migrator(const std::string& pool_name) {
  std::unique_lock lock(mu_);
  sync_wall_locked();
  const std::string tape_pool = pool_locked(pool_name).tape_pool;
  const std::string disk_pool = pool_locked(pool_name).name;
  const StagerStats before = stats_;
  const size_t first_transfer = transfers_.size();
  last_migration_error_.clear();
  auto pending = [&] {
    for (const auto& [key, t] : writes_) {
      if (t.kind == TaskKind::kMigrate && t.disk_pool == disk_pool && t.failures < 3) return true;
    }
    return false;
  };
  auto active = [&] {
    for (const auto& [id, b] : batches_) {
      if (b.tape_pool == tape_pool) return true;
    }
    return false;
  };
  while (true) {
    no_volume_until_.erase(tape_pool);
    const size_t started = start_batches_locked(tape_pool, false);
    pump_locked();
    if (started == 0 && !active()) break;
    wait_locked(lock, [&] { return !active(); });
    if (!pending()) break;
    if (no_volume_until_.count(tape_pool)) break;
  }
  MigrationReport report;
  report.files = stats_.copies_migrated - before.copies_migrated;
  report.bytes = stats_.bytes_to_tape - before.bytes_to_tape;
  std::set<std::string> vids;
  for (size_t i = first_transfer; i < transfers_.size(); ++i) {
    if (transfers_[i].to_tape) vids.insert(transfers_[i].vid);
  }
  report.tapes_used.assign(vids.begin(), vids.end());
  if (pending()) report.error = last_migration_error_.empty() ? "files left TO_MIGRATE" : last_migration_error_;
  return report;
}

// ---- recall ----

void Stager::start_read(ReadTask& r) {
  const ns::Segment& seg = r.segments.at(r.idx);
  r.vid = seg.vid;
  r.req_id = 0;
  if (auto it = vids_in_use_.find(seg.vid); it != vids_in_use_.end() && it->second != r.id) return;  // retried on poll
  vids_in_use_[seg.vid] = r.id;
  try {
    const auto vol = vmgr_.query(seg.vid);
    r.req_id = vdqm_.submit_request(seg.vid, vdqm::Access::kRead, vol.model, options_.client_name);
    r.submit_us = now_;
  } catch (const CastorError& e) {
    vids_in_use_.erase(seg.vid);
    finish_read(r, e.what());
  }
}

void Stager::poll_assignments_locked() {
  std::vector<uint64_t> ids;
  for (const auto& [id, b] : batches_) {
    if (!b.running && b.req_id != 0) ids.push_back(id);
  }
  for (uint64_t id : ids) {
    auto it = batches_.find(id);
    if (it == batches_.end()) continue;
    Batch& b = it->second;
    std::optional<std::string> drive;
    try {
      drive = vdqm_.assignment(b.req_id);
    } catch (const std::exception& e) {
      spdlog::warn("vdqm assignment: {}", e.what());
    }
    if (!drive) continue;
    b.running = true;
    b.drive = *drive;
    queue_waits_.push_back(now_ - b.submit_us);
    start_next_write(b);
  }
  ids.clear();
  for (const auto& [id, r] : reads_) {
    if (!r.running) ids.push_back(id);
  }
  for (uint64_t id : ids) {
    auto it = reads_.find(id);
    if (it == reads_.end()) continue;
    ReadTask& r = it->second;
    if (r.req_id == 0) {
      start_read(r);
      continue;
    }
    std::optional<std::string> drive;
    try {
      drive = vdqm_.assignment(r.req_id);
    } catch (const std::exception& e) {
      spdlog::warn("vdqm assignment: {}", e.what());
    }
    if (!drive) continue;
    r.running = true;
    r.drive = *drive;
    queue_waits_.push_back(now_ - r.submit_us);
    if (r.purpose == ReadPurpose::kStage) {
      auto cit = copies_.find(r.file_id);
      if (cit != copies_.end() && cit->second.state == CopyState::kRecallPending) {
        DiskCopy c = cit->second;
        change_state(c, CopyState::kRecalling);
        set_copy(c);
      }
    }
    const ns::Segment& seg = r.segments.at(r.idx);
    mover::TransferJob job;
    job.job_id = next_id_++;
    job.direction = mover::Direction::kTapeToDisk;
    job.vid = seg.vid;
    job.fseq = seg.fseq;
    job.size_bytes = seg.seg_size;
    job.expected_checksum = seg.seg_checksum;
    job.disk_server = r.address;
    job.disk_path = r.path;
    job.disk_offset = r.offset;
    ++stats_.recall_jobs;
    Event e;
    e.t = now_;
    e.is_write = false;
    e.owner = r.id;
    try {
      auto& m = mover_for(r.drive);
      m.sync_clock(r.drive, now_);
      e.report = m.run_job(r.drive, job);
      e.t = std::max(now_, e.report->end_us);
    } catch (const CastorError& ex) {
      e.code = ex.code();
      e.error = ex.what();
    }
    schedule(std::move(e));
  }
}

void Stager::on_read_done(const Event& e) {
  auto it = reads_.find(e.owner);
  if (it == reads_.end()) return;
  ReadTask& r = it->second;
  try {
    vdqm_.release_drive(r.drive, r.req_id);
  } catch (const std::exception& ex) {
    spdlog::warn("releasing drive {}: {}", r.drive, ex.what());
  }
  if (auto v = vids_in_use_.find(r.vid); v != vids_in_use_.end() && v->second == r.id) vids_in_use_.erase(v);
  r.running = false;
  r.req_id = 0;
  if (!e.report) {
    ++stats_.failed_jobs;
    finish_read(r, e.error);
    return;
  }
  transfers_.push_back(
      TransferRecord{r.drive, r.vid, false, e.report->bytes, e.report->start_us, e.report->end_us, e.report->stream_s});
  r.drive.clear();
  r.offset += r.segments.at(r.idx).seg_size;
  ++r.idx;
  if (r.idx < r.segments.size()) {
    start_read(r);
  } else {
    finish_read(r, "");
  }
}

void Stager::finish_read(ReadTask& r, const std::string& error_in) {
  std::string error = error_in;
  if (error.empty()) {
    try {
      const auto d = disk_for(r.address).checksum(r.path);
      if (d.size != r.size || (r.checksum && d.crc32 != *r.checksum)) {
        error = "ChecksumMismatch: recalled " + r.path + " does not match the catalog";
      }
    } catch (const std::exception& e) {
      error = e.what();
    }
  }
  const uint64_t id = r.id;
  const uint64_t fid = r.file_id;
  if (r.purpose == ReadPurpose::kStage) {
    if (error.empty()) {
      DiskCopy c = copies_.at(fid);
      if (c.state == CopyState::kRecallPending) change_state(c, CopyState::kRecalling);
      change_state(c, CopyState::kStaged);
      c.last_access_us = now_;
      set_copy(c);
    } else {
      spdlog::warn("recall of {} failed: {}", fid, error);
      drop_copy(fid, true);
    }
    r.outcome->error = error;
    r.outcome->done = true;
    recall_of_file_.erase(fid);
  } else {
    auto jit = repacks_.find(r.repack_id);
    if (jit != repacks_.end()) {
      RepackJob& job = jit->second;
      if (!error.empty()) {
        repack_file_failed(job, fid, error);
      } else {
        WriteTask t;
        t.kind = TaskKind::kRepack;
        t.file_id = fid;
        t.copy_no = r.copy_no;
        t.disk_pool = job.disk_pool;
        t.tape_pool = job.target_pool;
        t.address = r.address;
        t.path = r.path;
        t.size = r.size;
        t.checksum = r.checksum;
        t.exclude_vids = {job.vid};
        try {
          for (const auto& s : ns_.get_segments(fid)) {
            if (s.copy_no != r.copy_no) t.exclude_vids.push_back(s.vid);
          }
        } catch (const std::exception&) {
        }
        t.since_us = now_;
        t.repack_id = job.id;
        writes_[{fid, r.copy_no}] = t;
      }
    }
  }
  reads_.erase(id);
  cv_.notify_all();
}

// ---- repack ----

void Stager::repack_file_failed(RepackJob& job, uint64_t file_id, const std::string& why) {
  spdlog::warn("repack of {} on {}: {}", file_id, job.vid, why);
  if (auto sc = job.scratch.find(file_id); sc != job.scratch.end()) {
    charge(sc->second, -1);
    try {
      disk_for(address_of(sc->second.server)).remove(sc->second.path);
    } catch (const std::exception&) {
    }
    job.scratch.erase(sc);
  }
  job.report.failed_files.push_back(file_id);
  if (job.report.error.empty()) job.report.error = why;
  --job.outstanding;
}

RepackReport Stager::repack(const std::string& vid, const std::string& target_pool, const std::string& disk_pool) {
  std::unique_lock lock(mu_);
  sync_wall_locked();
  const auto vol = vmgr_.query(vid);
  DiskPool& pool = pool_locked(disk_pool);
  vmgr_.set_status(vid, vol.status | vmgr::kRdonly);
  RepackJob& job = repacks_[next_id_];
  job.id = next_id_++;
  job.vid = vid;
  job.target_pool = target_pool;
  job.disk_pool = pool.name;
  std::set<std::pair<uint64_t, uint32_t>> copies;
  for (const auto& s : ns_.segments_on_vid(vid)) copies.insert({s.file_id, s.copy_no});
  for (const auto& [fid, copy_no] : copies) {
    ++job.outstanding;
    const ns::NsEntry entry = ns_.stat_id(fid);
    FileSystem* fs = place_locked(pool, entry.size_bytes);
    if (fs == nullptr) {
      gc_locked(pool, true, entry.size_bytes);
      fs = place_locked(pool, entry.size_bytes);
    }
    if (fs == nullptr) {
      repack_file_failed(job, fid, "NoSpace: no scratch space for " + std::to_string(fid));
      continue;
    }
    DiskCopy scratch;
    scratch.file_id = fid;
    scratch.pool = pool.name;
    scratch.server = fs->server;
    scratch.mount = fs->mount;
    scratch.path = fs->mount + "/repack." + std::to_string(fid) + "." + std::to_string(copy_no);
    scratch.size_bytes = entry.size_bytes;
    charge(scratch, +1);
    job.scratch[fid] = scratch;
    ReadTask r;
    r.id = next_id_++;
    r.purpose = ReadPurpose::kRepack;
    r.file_id = fid;
    r.copy_no = copy_no;
    r.segments = copy_segments(ns_.get_segments(fid), copy_no);
    r.address = address_of(fs->server);
    r.path = scratch.path;
    r.size = entry.size_bytes;
    r.checksum = entry.checksum;
    r.repack_id = job.id;
    r.disk_pool = pool.name;
    try {
      disk_for(r.address).remove(r.path);
    } catch (const std::exception&) {
    }
    reads_[r.id] = r;
    start_read(reads_.at(r.id));
  }
  const uint64_t jid = job.id;
  pump_locked();
  wait_locked(lock, [&] { return repacks_.at(jid).outstanding == 0; });
  RepackJob done = repacks_.at(jid);
  repacks_.erase(jid);
  RepackReport report = done.report;
  report.new_vids.assign(done.new_vids.begin(), done.new_vids.end());
  if (report.failed_files.empty() && ns_.segments_on_vid(vid).empty()) {
    vmgr_.set_status(vid, vmgr::kExported);
    report.exported = true;
  }
  return report;
}

// ---- persistence ----

void Stager::commit(const Json& record) {
  if (journal_) journal_->append(record);
  apply(record);
  if (journal_ && journal_->snapshot_due()) journal_->write_snapshot(state());
}

void Stager::apply(const Json& r) {
  const std::string t = r.at("t").get<std::string>();
  if (t == "copy") {
    DiskCopy c = r.at("c").get<DiskCopy>();
    copies_[c.file_id] = c;
  } else if (t == "drop") {
    copies_.erase(r.at("id").get<uint64_t>());
  } else if (t == "vid_busy") {
    busy_vids_.insert(r.at("vid").get<std::string>());
  } else if (t == "vid_free") {
    busy_vids_.erase(r.at("vid").get<std::string>());
  } else {
    raise(Errc::kInternal, "unknown stager journal record " + t);
  }
}

Json Stager::state() const {
  Json copies = Json::array();
  for (const auto& [id, c] : copies_) copies.push_back(c);
  return Json{{"copies", copies}, {"busy_vids", busy_vids_}};
}

void Stager::load(const Json& s) {
  copies_.clear();
  for (const auto& c : s.at("copies")) {
    DiskCopy copy = c.get<DiskCopy>();
    copies_[copy.file_id] = copy;
  }
  busy_vids_ = s.at("busy_vids").get<std::set<std::string>>();
}

void Stager::recover() {
  if (!options_.journal_dir.empty()) {
    journal_ = std::make_unique<Journal>(options_.journal_dir, options_.journal);
    journal_->recover([this](const Json& s) { load(s); }, [this](const Json& r) { apply(r); });
  }
  // Requests and volume locks of a previous incarnation are void.
  try {
    vdqm_.cancel_client(options_.client_name);
  } catch (const std::exception& e) {
    spdlog::warn("vdqm cancel_client: {}", e.what());
  }
  for (const auto& vid : std::set<std::string>(busy_vids_)) {
    try {
      vmgr_.release(vid);
    } catch (const std::exception& e) {
      spdlog::warn("vmgr release {}: {}", vid, e.what());
    }
    commit(Json{{"t", "vid_free"}, {"vid", vid}});
  }
  // Interrupted recalls start over; interrupted migrations go back in line.
  std::vector<uint64_t> stale;
  for (auto& [id, c] : copies_) {
    if (c.state == CopyState::kRecallPending || c.state == CopyState::kRecalling || c.state == CopyState::kInvalid) {
      stale.push_back(id);
    }
  }
  for (auto& [name, pool] : pools_) {
    for (auto& f : pool.filesystems) f.used_bytes = 0;
  }
  for (const auto& [id, c] : copies_) {
    if (pools_.count(c.pool)) charge(c, +1);
  }
  for (uint64_t id : stale) drop_copy(id, true);
  std::vector<DiskCopy> migrating;
  for (const auto& [id, c] : copies_) {
    if (c.state == CopyState::kMigrating || (c.state == CopyState::kToMigrate && !c.writing)) migrating.push_back(c);
  }
  for (DiskCopy c : migrating) {
    c.state = CopyState::kToMigrate;
    uint64_t partial = 0;
    try {
      // The catalog is authoritative for segments written before the crash.
      const auto segs = ns_.get_segments(c.file_id);
      c.copies_complete = 0;
      c.copy_vids.clear();
      for (const auto& [copy_no, sum] : copy_sums(segs)) {
        if (sum == c.size_bytes) {
          ++c.copies_complete;
        } else {
          partial = sum;
        }
      }
      for (const auto& s : segs) {
        if (std::find(c.copy_vids.begin(), c.copy_vids.end(), s.vid) == c.copy_vids.end()) c.copy_vids.push_back(s.vid);
      }
    } catch (const CastorError& e) {
      if (e.code() == Errc::kNotFound) {
        drop_copy(c.file_id, true);
        continue;
      }
      spdlog::warn("reconciling {}: {}", c.file_id, e.what());
    }
    const DiskPool& pool = pool_locked(c.pool);
    if (c.copies_complete >= pool.copies_required) c.state = CopyState::kStaged;
    set_copy(c);
    if (c.state == CopyState::kToMigrate) {
      add_migrate_task(c);
      writes_.at({c.file_id, c.copies_complete + 1}).done = partial;
    }
  }
  // Disk scan: physical files the table does not know about are leftovers.
  std::set<std::string> known;
  for (const auto& [id, c] : copies_) known.insert(c.path);
  for (auto& [name, pool] : pools_) {
    for (auto& f : pool.filesystems) {
      auto& disk = disk_for(address_of(f.server));
      disk.mkdirs(f.mount);
      std::set<std::string> present;
      for (const auto& [file, size] : disk.list(f.mount)) {
        const std::string full = f.mount + "/" + file;
        present.insert(full);
        if (!known.count(full) && is_ours(file)) disk.remove(full);
      }
      std::vector<uint64_t> missing;
      for (const auto& [id, c] : copies_) {
        if (c.server == f.server && c.mount == f.mount && !present.count(c.path) && !c.writing) missing.push_back(id);
      }
      for (uint64_t id : missing) {
        spdlog::warn("disk copy of {} is missing from {}:{}", id, f.server, f.mount);
        drop_copy(id, false);
      }
    }
  }
}

}  // namespace castor::stager
