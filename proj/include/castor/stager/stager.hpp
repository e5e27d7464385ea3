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

#include <condition_variable>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <queue>
#include <set>
#include <thread>

#include "castor/common/clock.hpp"
#include "castor/common/journal.hpp"
#include "castor/mover/service.hpp"
#include "castor/ns/service.hpp"
#include "castor/rfio/disk_client.hpp"
#include "castor/stager/types.hpp"
#include "castor/vdqm/service.hpp"
#include "castor/vmgr/service.hpp"

namespace castor::stager {

struct StagerOptions {
  std::vector<DiskPool> pools;
  std::shared_ptr<Connector> connector;
  ns::RouteTable ns_routes;
  std::string vmgr_address;
  std::string vdqm_address;
  // Tape server name to mover address; "*" matches any server.
  std::map<std::string, std::string> mover_addresses;
  // Disk server name to rfiod address.
  std::map<std::string, std::string> disk_addresses;
  std::string client_name = "stager";
  std::filesystem::path journal_dir;  // empty: no persistence
  JournalOptions journal;
  // When set, the stager clock never lags this clock.
  const Clock* wall = nullptr;
  int64_t start_us = 0;
  // Blocking calls give up with EnvironmentDown after this much real time
  // without progress.
  std::chrono::milliseconds block_timeout{120000};
  bool auto_migrate = true;
};

// Policy engine of one stager instance. All decisions run under one lock in
// virtual-time order: transfers are started on the movers right away and their
// completions are applied when the stager clock reaches the job end time.
// A harness moves the clock with advance_to(); blocking calls and the
// background thread move it eagerly to the next completion.
class Stager {
 public:
  explicit Stager(StagerOptions options);
  ~Stager();
  Stager(const Stager&) = delete;
  Stager& operator=(const Stager&) = delete;

  Location stage_out(const std::string& path, uint64_t size_hint, const std::string& pool = "");
  fileio::Digest put_done(const std::string& path);
  // With wait=false a cold file returns at once with pending=true.
  Location stage_in(const std::string& path, bool wait = true, const std::string& pool = "");
  std::vector<DiskCopy> query(const std::string& pool = "") const;
  std::optional<DiskCopy> copy_of(uint64_t file_id) const;

  MigrationReport run_migrator(const std::string& pool);
  GcReport run_gc(const std::string& pool);
  // Evicts the STAGED disk copy of one file; Busy in any other state.
  GcReport purge(const std::string& path);
  RepackReport repack(const std::string& vid, const std::string& target_pool, const std::string& disk_pool = "");

  std::vector<DiskPool> pools() const;
  StagerStats stats() const;
  std::vector<TransferRecord> transfers() const;
  std::vector<int64_t> queue_waits_us() const;
  // Space accounting and state checks; empty when all hold.
  std::vector<std::string> check_invariants() const;

  int64_t now_us() const;
  int64_t next_event_us() const;
  // Applies every completion due at or before t, then sets the clock to t.
  void advance_to(int64_t t_us);
  // Applies completions until nothing is in flight or queued for a drive.
  void run_until_idle();
  bool idle() const;

  // Eager mode for daemons: a thread that keeps applying completions and
  // polling the drive queue.
  void start_background(std::chrono::milliseconds period = std::chrono::milliseconds(20));
  void stop_background();

 private:
  using TaskKey = std::pair<uint64_t, uint32_t>;  // file_id, copy_no

  enum class TaskKind { kMigrate, kRepack };
  struct WriteTask {
    TaskKind kind = TaskKind::kMigrate;
    uint64_t file_id = 0;
    uint32_t copy_no = 1;
    std::string disk_pool;
    std::string tape_pool;
    std::string address;
    std::string path;
    uint64_t size = 0;
    uint64_t done = 0;
    std::optional<uint32_t> checksum;
    std::vector<std::string> exclude_vids;
    std::vector<ns::Segment> segments;  // repack: new copy, swapped in at the end
    uint64_t batch = 0;
    int failures = 0;
    int64_t since_us = 0;
    uint64_t repack_id = 0;
  };

  struct Batch {
    uint64_t id = 0;
    std::string tape_pool;
    std::string vid;
    std::string model;
    uint64_t capacity = 0;
    uint64_t free = 0;
    uint32_t next_fseq = 1;
    uint64_t req_id = 0;
    int64_t submit_us = 0;
    std::string drive;
    bool running = false;
    bool busy = false;  // a job is in flight
    bool done = false;
    std::optional<TaskKey> claimed;
    std::optional<TaskKey> current;
    uint64_t cur_offset = 0;
    uint64_t cur_len = 0;
    uint32_t cur_fseq = 0;
    uint32_t files = 0;
  };

  struct RecallOutcome {
    bool done = false;
    std::string error;
  };

  enum class ReadPurpose { kStage, kRepack };
  struct ReadTask {
    uint64_t id = 0;
    ReadPurpose purpose = ReadPurpose::kStage;
    uint64_t file_id = 0;
    uint32_t copy_no = 1;
    std::vector<ns::Segment> segments;
    size_t idx = 0;
    uint64_t offset = 0;
    std::string address;
    std::string path;
    std::string vid;  // vid of the segment being read
    uint64_t req_id = 0;
    int64_t submit_us = 0;
    std::string drive;
    bool running = false;
    uint64_t repack_id = 0;
    std::string disk_pool;
    uint64_t size = 0;
    std::optional<uint32_t> checksum;
    std::shared_ptr<RecallOutcome> outcome;
  };

  struct RepackJob {
    uint64_t id = 0;
    std::string vid;
    std::string target_pool;
    std::string disk_pool;
    size_t outstanding = 0;
    RepackReport report;
    std::set<std::string> new_vids;
    // Scratch files: file_id to (server, mount, path, bytes).
    std::map<uint64_t, DiskCopy> scratch;
  };

  struct Event {
    int64_t t = 0;
    uint64_t seq = 0;
    bool is_write = true;
    uint64_t owner = 0;
    std::optional<mover::TransferReport> report;
    Errc code = Errc::kInternal;
    std::string error;
    bool operator>(const Event& o) const { return t != o.t ? t > o.t : seq > o.seq; }
  };

  // Time and events.
  void sync_wall_locked();
  bool step_locked();
  void pump_locked();
  void wait_locked(std::unique_lock<std::mutex>& lock, const std::function<bool()>& done);
  void schedule(Event e);

  // Placement and accounting.
  DiskPool& pool_locked(const std::string& name);
  const DiskPool& pool_locked(const std::string& name) const;
  FileSystem* place_locked(DiskPool& pool, uint64_t bytes);
  FileSystem& fs_of(DiskPool& pool, const std::string& server, const std::string& mount);
  void charge(const DiskCopy& c, int64_t sign);
  void set_copy(DiskCopy c);
  void drop_copy(uint64_t file_id, bool remove_file);
  void change_state(DiskCopy& c, CopyState to);
  GcReport gc_locked(DiskPool& pool, bool force, uint64_t need_bytes = 0);

  // Migration.
  void add_migrate_task(const DiskCopy& c);
  void check_triggers_locked();
  bool pool_triggered(const DiskPool& pool) const;
  size_t start_batches_locked(const std::string& tape_pool, bool only_triggered);
  bool eligible_for(const WriteTask& t, const Batch& b) const;
  void start_next_write(Batch& b);
  void on_write_done(const Event& e);
  void finish_copy(WriteTask& t, const std::string& vid);
  void end_batch(Batch& b);
  uint32_t streams_for(const std::string& tape_pool) const;

  // Recall.
  void start_read(ReadTask& r);
  void on_read_done(const Event& e);
  void finish_read(ReadTask& r, const std::string& error);
  void poll_assignments_locked();

  // Repack.
  void repack_file_failed(RepackJob& job, uint64_t file_id, const std::string& why);

  // Peers.
  mover::MoverClient& mover_for(const std::string& drive);
  rfio::DiskClient& disk_for(const std::string& address);
  std::string address_of(const std::string& server) const;
  std::string copy_path(const FileSystem& fs, uint64_t file_id) const;

  // Persistence.
  void commit(const Json& record);
  void apply(const Json& record);
  Json state() const;
  void load(const Json& state);
  void recover();

  StagerOptions options_;
  std::map<std::string, DiskPool> pools_;
  std::vector<std::string> pool_order_;
  ns::NsClient ns_;
  vmgr::VmgrClient vmgr_;
  vdqm::VdqmClient vdqm_;
  std::map<std::string, std::unique_ptr<mover::MoverClient>> movers_;
  std::map<std::string, std::string> drive_servers_;
  std::map<std::string, std::unique_ptr<rfio::DiskClient>> disks_;
  std::unique_ptr<Journal> journal_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  int64_t now_ = 0;
  uint64_t next_id_ = 1;
  uint64_t event_seq_ = 0;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;

  std::map<uint64_t, DiskCopy> copies_;
  std::map<TaskKey, WriteTask> writes_;
  std::map<uint64_t, Batch> batches_;
  std::map<uint64_t, ReadTask> reads_;
  std::map<uint64_t, uint64_t> recall_of_file_;  // file_id to read id
  std::map<uint64_t, RepackJob> repacks_;
  std::map<std::string, uint64_t> vids_in_use_;
  std::set<std::string> busy_vids_;  // journaled, released on recovery
  std::map<std::string, int64_t> no_volume_until_;
  std::string last_migration_error_;

  StagerStats stats_;
  std::vector<TransferRecord> transfers_;
  std::vector<int64_t> queue_waits_;

  std::thread background_;
  bool stop_ = false;
};

}  // namespace castor::stager
