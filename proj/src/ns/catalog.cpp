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

#include "castor/ns/catalog.hpp"

#include <algorithm>
#include <mutex>

namespace castor::ns {

namespace {

bool segment_order(const Segment& a, const Segment& b) {
  return a.copy_no != b.copy_no ? a.copy_no < b.copy_no : a.seg_seq < b.seg_seq;
}

}  // namespace

Catalog::Catalog(CatalogOptions options) : options_(std::move(options)) {
  if (options_.clock == nullptr) own_clock_ = std::make_unique<WallClock>();
  clock_ = options_.clock != nullptr ? options_.clock : own_clock_.get();
  root_id_ = (uint64_t{options_.instance_id} << kInstanceShift) | 1;
  next_id_ = root_id_ + 1;
  NsEntry root;
  root.file_id = root_id_;
  root.parent_id = 0;
  root.kind = EntryKind::kDirectory;
  root.mode = 0755;
  entries_[root_id_] = root;
  children_[root_id_];

  if (!options_.journal_dir.empty()) {
    journal_ = std::make_unique<Journal>(options_.journal_dir, options_.journal);
    journal_->recover([this](const Json& s) { load(s); }, [this](const Json& r) { apply(r); });
  }
  bootstrap();
}

Catalog::~Catalog() = default;

void Catalog::bootstrap() {
  for (const auto& dir : options_.implicit_dirs) {
    const auto parts = split_path(dir);
    for (size_t n = 1; n <= parts.size(); ++n) {
      const std::string prefix = join_path({parts.begin(), parts.begin() + static_cast<long>(n)});
      try {
        mkdir(prefix, 0755, 0, 0);
      } catch (const CastorError& e) {
        if (e.code() != Errc::kExists) throw;
      }
    }
  }
}

int64_t Catalog::now() const { return clock_->now_us(); }

const NsEntry& Catalog::entry(uint64_t id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) raise(Errc::kNotFound, "no entry with file_id " + std::to_string(id));
  return it->second;
}

uint64_t Catalog::walk(const std::vector<std::string>& parts) const {
  uint64_t cur = root_id_;
  for (const auto& name : parts) {
    if (!entries_.at(cur).is_dir()) raise(Errc::kNotADirectory, entries_.at(cur).name + " is not a directory");
    const auto& kids = children_.at(cur);
    auto it = kids.find(name);
    if (it == kids.end()) raise(Errc::kNotFound, join_path(parts));
    cur = it->second;
  }
  return cur;
}

uint64_t Catalog::parent_for_new(const std::vector<std::string>& parts) const {
  if (parts.empty()) raise(Errc::kExists, std::string(kRootPath));
  const uint64_t parent = walk({parts.begin(), parts.end() - 1});
  if (!entries_.at(parent).is_dir()) raise(Errc::kNotADirectory, "parent of " + join_path(parts) + " is a file");
  return parent;
}

bool Catalog::is_ancestor(uint64_t maybe_ancestor, uint64_t id) const {
  for (uint64_t cur = id; cur != 0; cur = entries_.at(cur).parent_id) {
    if (cur == maybe_ancestor) return true;
  }
  return false;
}

void Catalog::commit(const Json& record) {
  if (journal_) journal_->append(record);
  apply(record);
  if (journal_ && journal_->snapshot_due()) journal_->write_snapshot(state());
}

uint64_t Catalog::create_entry(std::string_view path, EntryKind kind, uint32_t mode, uint32_t uid, uint32_t gid) {
  const auto parts = split_path(path);
  std::unique_lock lock(mu_);
  const uint64_t parent = parent_for_new(parts);
  if (children_.at(parent).count(parts.back()) != 0) raise(Errc::kExists, std::string(path));
  const uint64_t id = next_id_;
  commit(Json{{"t", kind == EntryKind::kDirectory ? "mkdir" : "create"},
              {"id", id},
              {"parent", parent},
              {"name", parts.back()},
              {"mode", mode & 07777},
              {"uid", uid},
              {"gid", gid},
              {"time", now()}});
  return id;
}

uint64_t Catalog::mkdir(std::string_view path, uint32_t mode, uint32_t uid, uint32_t gid) {
  return create_entry(path, EntryKind::kDirectory, mode, uid, gid);
}

uint64_t Catalog::create_file(std::string_view path, uint32_t mode, uint32_t uid, uint32_t gid) {
  return create_entry(path, EntryKind::kFile, mode, uid, gid);
}

NsEntry Catalog::stat(std::string_view path) const {
  const auto parts = split_path(path);
  std::shared_lock lock(mu_);
  return entries_.at(walk(parts));
}

NsEntry Catalog::stat_id(uint64_t file_id) const {
  std::shared_lock lock(mu_);
  return entry(file_id);
}

std::string Catalog::path_of(uint64_t file_id) const {
  std::shared_lock lock(mu_);
  std::vector<std::string> parts;
  for (uint64_t cur = entry(file_id).file_id; cur != root_id_; cur = entries_.at(cur).parent_id) {
    parts.push_back(entries_.at(cur).name);
  }
  std::reverse(parts.begin(), parts.end());
  return join_path(parts);
}

void Catalog::unlink(std::string_view path) {
  const auto parts = split_path(path);
  std::unique_lock lock(mu_);
  const uint64_t id = walk(parts);
  if (entries_.at(id).is_dir()) raise(Errc::kIsADirectory, std::string(path));
  commit(Json{{"t", "unlink"}, {"id", id}, {"time", now()}});
}

void Catalog::rmdir(std::string_view path) {
  const auto parts = split_path(path);
  std::unique_lock lock(mu_);
  const uint64_t id = walk(parts);
  if (id == root_id_) raise(Errc::kInvalidArgument, "cannot remove the root");
  if (!entries_.at(id).is_dir()) raise(Errc::kNotADirectory, std::string(path));
  if (!children_.at(id).empty()) raise(Errc::kNotEmpty, std::string(path));
  commit(Json{{"t", "rmdir"}, {"id", id}, {"time", now()}});
}

void Catalog::rename(std::string_view old_path, std::string_view new_path) {
  const auto old_parts = split_path(old_path);
  const auto new_parts = split_path(new_path);
  std::unique_lock lock(mu_);
  const uint64_t id = walk(old_parts);
  if (id == root_id_) raise(Errc::kInvalidArgument, "cannot rename the root");
  if (new_parts.empty()) raise(Errc::kExists, std::string(new_path));
  const uint64_t new_parent = parent_for_new(new_parts);
  if (is_ancestor(id, new_parent)) {
    raise(Errc::kCycleError, std::string(new_path) + " is inside " + std::string(old_path));
  }
  if (children_.at(new_parent).count(new_parts.back()) != 0) raise(Errc::kExists, std::string(new_path));
  commit(Json{{"t", "rename"}, {"id", id}, {"parent", new_parent}, {"name", new_parts.back()}, {"time", now()}});
}

std::vector<NsEntry> Catalog::list_dir(std::string_view path) const {
  const auto parts = split_path(path);
  std::shared_lock lock(mu_);
  const uint64_t id = walk(parts);
  if (!entries_.at(id).is_dir()) raise(Errc::kNotADirectory, std::string(path));
  std::vector<NsEntry> out;
  for (const auto& [name, child] : children_.at(id)) out.push_back(entries_.at(child));
  return out;
}

void Catalog::check_segments(uint64_t file_id, uint32_t copy_no, const std::vector<Segment>& segs,
                             bool replacing) const {
  const NsEntry& e = entry(file_id);
  if (e.is_dir()) raise(Errc::kIsADirectory, "segments on a directory");
  uint64_t total = 0;
  for (size_t i = 0; i < segs.size(); ++i) {
    const Segment& s = segs[i];
    if (s.copy_no != copy_no || s.seg_seq != i + 1) {
      raise(Errc::kInvalidArgument, "segment sequence of copy " + std::to_string(copy_no) + " is not contiguous");
    }
    if (s.vid.empty() || s.fseq == 0) raise(Errc::kInvalidArgument, "segment needs a vid and fseq >= 1");
    const bool already_present = !replacing && i + 1 < segs.size();
    auto hit = tape_index_.find({s.vid, s.fseq});
    if (hit != tape_index_.end() && !already_present) {
      // A replacement may reuse locations of the copy it replaces.
      bool own = false;
      if (replacing && hit->second == file_id) {
        auto it = segments_.find(file_id);
        for (const auto& old : it->second) {
          if (old.copy_no == copy_no && old.vid == s.vid && old.fseq == s.fseq) own = true;
        }
      }
      if (!own) raise(Errc::kDuplicateTapeLocation, s.vid + "/" + std::to_string(s.fseq));
    }
    for (size_t k = 0; k < i; ++k) {
      if (segs[k].vid == s.vid && segs[k].fseq == s.fseq) raise(Errc::kDuplicateTapeLocation, s.vid + "/" + std::to_string(s.fseq));
    }
    total += s.seg_size;
  }
  if (total > e.size_bytes || (replacing && !segs.empty() && total != e.size_bytes)) {
    raise(Errc::kSizeMismatch, "copy " + std::to_string(copy_no) + " of " + std::to_string(file_id) + " sums to " +
                                   std::to_string(total) + ", file size is " + std::to_string(e.size_bytes));
  }
}

void Catalog::add_segment(uint64_t file_id, Segment segment) {
  std::unique_lock lock(mu_);
  entry(file_id);
  segment.file_id = file_id;
  std::vector<Segment> copy;
  if (auto it = segments_.find(file_id); it != segments_.end()) {
    for (const auto& s : it->second) {
      if (s.copy_no == segment.copy_no) copy.push_back(s);
    }
  }
  if (segment.seg_seq == 0) segment.seg_seq = static_cast<uint32_t>(copy.size() + 1);
  copy.push_back(segment);
  check_segments(file_id, segment.copy_no, copy, false);
  commit(Json{{"t", "add_seg"}, {"seg", segment}});
}

void Catalog::replace_segments(uint64_t file_id, uint32_t copy_no, std::vector<Segment> segments) {
  std::unique_lock lock(mu_);
  entry(file_id);
  for (size_t i = 0; i < segments.size(); ++i) {
    segments[i].file_id = file_id;
    segments[i].copy_no = copy_no;
    if (segments[i].seg_seq == 0) segments[i].seg_seq = static_cast<uint32_t>(i + 1);
  }
  check_segments(file_id, copy_no, segments, true);
  commit(Json{{"t", "replace_segs"}, {"file_id", file_id}, {"copy_no", copy_no}, {"segs", segments}});
}

std::vector<Segment> Catalog::get_segments(uint64_t file_id) const {
  std::shared_lock lock(mu_);
  entry(file_id);
  auto it = segments_.find(file_id);
  return it == segments_.end() ? std::vector<Segment>{} : it->second;
}

std::vector<Segment> Catalog::segments_on_vid(const std::string& vid) const {
  std::shared_lock lock(mu_);
  std::vector<Segment> out;
  for (auto it = tape_index_.lower_bound({vid, 0}); it != tape_index_.end() && it->first.first == vid; ++it) {
    for (const auto& s : segments_.at(it->second)) {
      if (s.vid == vid && s.fseq == it->first.second) out.push_back(s);
    }
  }
  return out;
}

void Catalog::set_file_size(uint64_t file_id, uint64_t size_bytes, std::optional<uint32_t> checksum) {
  std::unique_lock lock(mu_);
  const NsEntry& e = entry(file_id);
  if (e.is_dir()) raise(Errc::kIsADirectory, "cannot size a directory");
  if (auto it = segments_.find(file_id); it != segments_.end()) {
    std::map<uint32_t, uint64_t> sums;
    for (const auto& s : it->second) sums[s.copy_no] += s.seg_size;
    for (const auto& [copy, sum] : sums) {
      if (sum > size_bytes || (sum == e.size_bytes && sum != size_bytes)) {
        raise(Errc::kSizeMismatch, "file has tape segments for the old size; drop them first");
      }
    }
  }
  commit(Json{{"t", "set_size"},
              {"id", file_id},
              {"size", size_bytes},
              {"checksum", checksum ? Json(*checksum) : Json()},
              {"time", now()}});
}

size_t Catalog::entry_count() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

void Catalog::apply(const Json& r) {
  const std::string t = r.at("t").get<std::string>();
  if (t == "mkdir" || t == "create") {
    NsEntry e;
    e.file_id = r.at("id").get<uint64_t>();
    e.parent_id = r.at("parent").get<uint64_t>();
    e.name = r.at("name").get<std::string>();
    e.kind = t == "mkdir" ? EntryKind::kDirectory : EntryKind::kFile;
    e.mode = r.at("mode").get<uint32_t>();
    e.uid = r.at("uid").get<uint32_t>();
    e.gid = r.at("gid").get<uint32_t>();
    e.ctime_us = e.mtime_us = r.at("time").get<int64_t>();
    entries_[e.file_id] = e;
    if (e.is_dir()) children_[e.file_id];
    children_.at(e.parent_id)[e.name] = e.file_id;
    entries_.at(e.parent_id).mtime_us = e.mtime_us;
    next_id_ = std::max(next_id_, e.file_id + 1);
  } else if (t == "unlink" || t == "rmdir") {
    const uint64_t id = r.at("id").get<uint64_t>();
    const NsEntry e = entries_.at(id);
    children_.at(e.parent_id).erase(e.name);
    entries_.at(e.parent_id).mtime_us = r.at("time").get<int64_t>();
    if (auto it = segments_.find(id); it != segments_.end()) {
      for (const auto& s : it->second) tape_index_.erase({s.vid, s.fseq});
      segments_.erase(it);
    }
    children_.erase(id);
    entries_.erase(id);
  } else if (t == "rename") {
    const uint64_t id = r.at("id").get<uint64_t>();
    NsEntry& e = entries_.at(id);
    const int64_t time = r.at("time").get<int64_t>();
    children_.at(e.parent_id).erase(e.name);
    entries_.at(e.parent_id).mtime_us = time;
    e.parent_id = r.at("parent").get<uint64_t>();
    e.name = r.at("name").get<std::string>();
    children_.at(e.parent_id)[e.name] = id;
    entries_.at(e.parent_id).mtime_us = time;
  } else if (t == "add_seg") {
    const Segment s = r.at("seg").get<Segment>();
    auto& segs = segments_[s.file_id];
    segs.push_back(s);
    std::sort(segs.begin(), segs.end(), segment_order);
    tape_index_[{s.vid, s.fseq}] = s.file_id;
  } else if (t == "replace_segs") {
    const uint64_t id = r.at("file_id").get<uint64_t>();
    const uint32_t copy_no = r.at("copy_no").get<uint32_t>();
    auto& segs = segments_[id];
    for (const auto& s : segs) {
      if (s.copy_no == copy_no) tape_index_.erase({s.vid, s.fseq});
    }
    std::erase_if(segs, [&](const Segment& s) { return s.copy_no == copy_no; });
    for (const auto& j : r.at("segs")) {
      const Segment s = j.get<Segment>();
      segs.push_back(s);
      tape_index_[{s.vid, s.fseq}] = id;
    }
    std::sort(segs.begin(), segs.end(), segment_order);
    if (segs.empty()) segments_.erase(id);
  } else if (t == "set_size") {
    NsEntry& e = entries_.at(r.at("id").get<uint64_t>());
    e.size_bytes = r.at("size").get<uint64_t>();
    e.checksum.reset();
    if (!r.at("checksum").is_null()) e.checksum = r.at("checksum").get<uint32_t>();
    e.mtime_us = r.at("time").get<int64_t>();
  } else {
    raise(Errc::kInternal, "unknown journal record '" + t + "'");
  }
}

Json Catalog::state() const {
  Json entries = Json::array();
  for (const auto& [id, e] : entries_) entries.push_back(e);
  Json segs = Json::array();
  for (const auto& [id, list] : segments_) {
    for (const auto& s : list) segs.push_back(s);
  }
  return Json{{"next_id", next_id_}, {"entries", entries}, {"segments", segs}};
}

void Catalog::load(const Json& s) {
  entries_.clear();
  children_.clear();
  segments_.clear();
  tape_index_.clear();
  next_id_ = s.at("next_id").get<uint64_t>();
  for (const auto& j : s.at("entries")) {
    NsEntry e = j.get<NsEntry>();
    if (e.is_dir()) children_[e.file_id];
    entries_[e.file_id] = e;
  }
  for (const auto& [id, e] : entries_) {
    if (e.parent_id != 0) children_[e.parent_id][e.name] = id;
  }
  for (const auto& j : s.at("segments")) {
    const Segment seg = j.get<Segment>();
    segments_[seg.file_id].push_back(seg);
    tape_index_[{seg.vid, seg.fseq}] = seg.file_id;
  }
  for (auto& [id, list] : segments_) std::sort(list.begin(), list.end(), segment_order);
}

}  // namespace castor::ns
