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
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "castor/common/clock.hpp"
#include "castor/common/journal.hpp"
#include "castor/ns/path.hpp"

namespace castor::ns {

struct CatalogOptions {
  uint16_t instance_id = 0;
  // Directories created on first boot, e.g. "/castor/cern.ch".
  std::vector<std::string> implicit_dirs;
  // Empty: in-memory only.
  std::filesystem::path journal_dir;
  JournalOptions journal;
  const Clock* clock = nullptr;  // defaults to wall clock
};

// The namespace and file->segment catalog. Reads take a shared lock; every
// mutation is validated, journaled (and synced) and only then applied, under
// one exclusive lock.
class Catalog {
 public:
  explicit Catalog(CatalogOptions options);
  ~Catalog();

  uint64_t mkdir(std::string_view path, uint32_t mode, uint32_t uid, uint32_t gid);
  uint64_t create_file(std::string_view path, uint32_t mode, uint32_t uid, uint32_t gid);
  NsEntry stat(std::string_view path) const;
  NsEntry stat_id(uint64_t file_id) const;
  std::string path_of(uint64_t file_id) const;
  void unlink(std::string_view path);
  void rmdir(std::string_view path);
  void rename(std::string_view old_path, std::string_view new_path);
  std::vector<NsEntry> list_dir(std::string_view path) const;

  void add_segment(uint64_t file_id, Segment segment);
  void replace_segments(uint64_t file_id, uint32_t copy_no, std::vector<Segment> segments);
  std::vector<Segment> get_segments(uint64_t file_id) const;
  std::vector<Segment> segments_on_vid(const std::string& vid) const;
  void set_file_size(uint64_t file_id, uint64_t size_bytes, std::optional<uint32_t> checksum);

  size_t entry_count() const;

 private:
  using Children = std::map<std::string, uint64_t>;

  uint64_t walk(const std::vector<std::string>& parts) const;
  uint64_t parent_for_new(const std::vector<std::string>& parts) const;
  const NsEntry& entry(uint64_t id) const;
  bool is_ancestor(uint64_t maybe_ancestor, uint64_t id) const;
  uint64_t create_entry(std::string_view path, EntryKind kind, uint32_t mode, uint32_t uid, uint32_t gid);
  void check_segments(uint64_t file_id, uint32_t copy_no, const std::vector<Segment>& segs,
                      bool replacing) const;

  void commit(const Json& record);
  void apply(const Json& record);
  Json state() const;
  void load(const Json& state);
  int64_t now() const;
  void bootstrap();

  CatalogOptions options_;
  std::unique_ptr<Clock> own_clock_;
  const Clock* clock_;
  std::unique_ptr<Journal> journal_;

  mutable std::shared_mutex mu_;
  uint64_t root_id_;
  uint64_t next_id_;
  std::unordered_map<uint64_t, NsEntry> entries_;
  std::unordered_map<uint64_t, Children> children_;
  std::unordered_map<uint64_t, std::vector<Segment>> segments_;  // sorted by (copy_no, seg_seq)
  std::map<std::pair<std::string, uint32_t>, uint64_t> tape_index_;
};

}  // namespace castor::ns
