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

#include "castor/mover/tape_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cstdio>

#include "castor/common/error.hpp"
#include "castor/common/file_io.hpp"
#include "castor/common/frame.hpp"
#include "castor/common/rpc.hpp"

namespace castor::mover {

namespace fs = std::filesystem;

TapeStore::TapeStore(fs::path root, bool sync) : root_(std::move(root)), sync_(sync) {
  fs::create_directories(root_);
}

fs::path TapeStore::file_path(const std::string& vid, uint32_t fseq) const {
  char name[16];
  std::snprintf(name, sizeof name, "%09u", fseq);
  return root_ / vid / name;
}

TapeStore::Index& TapeStore::index(const std::string& vid) {
  auto it = cache_.find(vid);
  if (it != cache_.end()) return it->second;
  Index idx;
  const fs::path path = root_ / vid / "index";
  if (fs::exists(path)) {
    auto fd = fileio::open_read(path);
    std::string body;
    while (true) {
      try {
        if (!wire::read_frame(fd.get(), body)) break;
      } catch (const CastorError&) {
        break;  // torn final record of an interrupted write
      }
      const Json rec = Json::parse(body, nullptr, false);
      if (rec.is_discarded()) break;
      if (rec.contains("truncate_from")) {
        idx.erase(idx.lower_bound(rec["truncate_from"].get<uint32_t>()), idx.end());
      } else {
        TapeFileInfo info{rec.at("fseq").get<uint32_t>(), rec.at("size").get<uint64_t>(), rec.at("crc32").get<uint32_t>()};
        idx[info.fseq] = info;
      }
    }
  }
  return cache_[vid] = std::move(idx);
}

void TapeStore::append(const std::string& vid, const std::string& record) {
  fs::create_directories(root_ / vid);
  const fs::path path = root_ / vid / "index";
  net::UniqueFd fd(::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644));
  if (!fd.valid()) raise_errno("open " + path.string());
  wire::write_frame(fd.get(), record);
  if (sync_ && ::fdatasync(fd.get()) != 0) raise_errno("fdatasync " + path.string());
}

std::optional<TapeFileInfo> TapeStore::lookup(const std::string& vid, uint32_t fseq) {
  std::lock_guard lock(mu_);
  const Index& idx = index(vid);
  auto it = idx.find(fseq);
  if (it == idx.end()) return std::nullopt;
  return it->second;
}

std::vector<TapeFileInfo> TapeStore::files(const std::string& vid) {
  std::lock_guard lock(mu_);
  std::vector<TapeFileInfo> out;
  for (const auto& [fseq, info] : index(vid)) out.push_back(info);
  return out;
}

uint32_t TapeStore::last_fseq(const std::string& vid) {
  std::lock_guard lock(mu_);
  const Index& idx = index(vid);
  return idx.empty() ? 0 : idx.rbegin()->first;
}

uint64_t TapeStore::bytes_before(const std::string& vid, uint32_t fseq) {
  std::lock_guard lock(mu_);
  uint64_t total = 0;
  const Index& idx = index(vid);
  for (auto it = idx.begin(); it != idx.end() && it->first < fseq; ++it) total += it->second.size;
  return total;
}

void TapeStore::truncate_from(const std::string& vid, uint32_t fseq) {
  std::lock_guard lock(mu_);
  Index& idx = index(vid);
  const uint32_t last = idx.empty() ? 0 : idx.rbegin()->first;
  if (fseq == 0 || fseq > last + 1) {
    raise(Errc::kInvalidArgument, vid + ": cannot write fseq " + std::to_string(fseq) + " after fseq " +
                                      std::to_string(last));
  }
  if (fseq <= last) {
    append(vid, Json{{"truncate_from", fseq}}.dump());
    for (auto it = idx.lower_bound(fseq); it != idx.end(); it = idx.erase(it)) {
      std::error_code ec;
      fs::remove(file_path(vid, it->first), ec);
    }
  }
  fs::create_directories(root_ / vid);
}

void TapeStore::record(const std::string& vid, const TapeFileInfo& info) {
  std::lock_guard lock(mu_);
  Index& idx = index(vid);
  append(vid, Json{{"fseq", info.fseq}, {"size", info.size}, {"crc32", info.crc32}}.dump());
  idx[info.fseq] = info;
}

void TapeStore::discard(const std::string& vid) {
  std::lock_guard lock(mu_);
  cache_.erase(vid);
  std::error_code ec;
  fs::remove_all(root_ / vid, ec);
}

}  // namespace castor::mover
