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
#include <filesystem>
#include <functional>
#include <mutex>

#include "castor/common/net.hpp"
#include "castor/common/rpc.hpp"

namespace castor {

struct JournalOptions {
  // fsync every record before the caller acknowledges the mutation. Turned off
  // only by tests that do not exercise durability.
  bool sync = true;
  // Records between snapshots; 0 disables snapshots.
  uint64_t snapshot_every = 50000;
};

// Append-only mutation log plus snapshot, both in the shared length-prefixed
// framing. journal.log holds {"seq", "rec"} frames; snapshot holds one
// {"seq", "state"} frame. Recovery loads the snapshot and replays records with
// a higher seq; a torn trailing frame is cut off.
class Journal {
 public:
  Journal(std::filesystem::path dir, JournalOptions options);
  ~Journal();
  Journal(const Journal&) = delete;
  Journal& operator=(const Journal&) = delete;

  void recover(const std::function<void(const Json& state)>& load_snapshot,
               const std::function<void(const Json& record)>& apply);

  void append(const Json& record);

  bool snapshot_due() const;
  void write_snapshot(const Json& state);

  uint64_t last_seq() const { return seq_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  void open_log();

  std::filesystem::path dir_;
  JournalOptions options_;
  net::UniqueFd log_;
  uint64_t seq_ = 0;
  uint64_t since_snapshot_ = 0;
  std::mutex mu_;
};

void fsync_directory(const std::filesystem::path& dir);

}  // namespace castor
