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

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <unordered_map>

#include "castor/common/journal.hpp"
#include "castor/vmgr/types.hpp"

namespace castor::vmgr {

struct RegistryOptions {
  double reserve_fraction = 0.01;
  std::filesystem::path journal_dir;
  JournalOptions journal;
};

// Tape volume catalog. Each pool keeps its migration-eligible volumes ordered
// by (free_bytes, vid) so best-fit selection is one lower_bound.
class Registry {
 public:
  explicit Registry(RegistryOptions options = {});
  ~Registry();

  void add_pool(const TapePool& pool);
  void add_volume(TapeVolume volume);
  // Adds the volume unless the vid is already known.
  bool ensure_volume(const TapeVolume& volume);
  void set_status(const std::string& vid, uint32_t flags);
  TapeVolume query(const std::string& vid) const;
  std::vector<TapeVolume> list(const std::string& pool = "") const;
  std::vector<TapePool> pools() const;

  TapeVolume select_tape_for_migration(const std::string& pool, uint64_t requested_bytes,
                                       const std::vector<std::string>& exclude_vids = {});
  void update_after_write(const std::string& vid, uint64_t bytes_written, uint32_t files_written,
                          bool keep_busy = false);
  // Drops BUSY without accounting a write.
  void release(const std::string& vid);

  uint64_t reserve_bytes(const TapeVolume& v) const;
  size_t volume_count() const;

 private:
  struct PoolState {
    TapePool pool;
    std::set<std::pair<uint64_t, std::string>> eligible;
  };

  TapeVolume& volume(const std::string& vid);
  const TapeVolume& volume(const std::string& vid) const;
  void unindex(const TapeVolume& v);
  void index(const TapeVolume& v);

  void commit(const Json& record);
  void apply(const Json& record);
  Json state() const;
  void load(const Json& state);

  RegistryOptions options_;
  std::unique_ptr<Journal> journal_;
  mutable std::shared_mutex mu_;
  std::map<std::string, PoolState> pools_;
  std::unordered_map<std::string, TapeVolume> volumes_;
};

}  // namespace castor::vmgr
