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

#include "castor/common/journal.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <fstream>
#include <sstream>

#include "castor/common/frame.hpp"

namespace castor {
namespace fs = std::filesystem;

namespace {

std::string read_whole(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void fsync_directory(const fs::path& dir) {
  net::UniqueFd fd(::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC));
  if (fd.valid()) ::fsync(fd.get());
}

Journal::Journal(fs::path dir, JournalOptions options) : dir_(std::move(dir)), options_(options) {
  fs::create_directories(dir_);
}

Journal::~Journal() = default;

void Journal::open_log() {
  log_.reset(::open((dir_ / "journal.log").c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644));
  if (!log_.valid()) raise_errno("open journal " + dir_.string());
}

void Journal::recover(const std::function<void(const Json&)>& load_snapshot,
                      const std::function<void(const Json&)>& apply) {
  std::lock_guard lock(mu_);
  uint64_t snapshot_seq = 0;
  const fs::path snap = dir_ / "snapshot";
  if (fs::exists(snap)) {
    wire::FrameDecoder dec;
    dec.feed(read_whole(snap));
    auto frame = dec.next();
    if (!frame) raise(Errc::kIoError, "corrupt snapshot in " + dir_.string());
    const Json doc = Json::parse(*frame);
    snapshot_seq = doc.at("seq").get<uint64_t>();
    load_snapshot(doc.at("state"));
  }
  seq_ = snapshot_seq;

  const fs::path log_path = dir_ / "journal.log";
  if (fs::exists(log_path)) {
    const std::string bytes = read_whole(log_path);
    size_t pos = 0;
    size_t good = 0;
    while (pos + 4 <= bytes.size()) {
      const uint32_t len = wire::get_u32(bytes, pos);
      if (len > wire::kMaxFrameBytes || pos + 4 + len > bytes.size()) break;
      Json doc;
      try {
        doc = Json::parse(std::string_view(bytes).substr(pos + 4, len));
      } catch (const nlohmann::json::exception&) {
        break;
      }
      pos += 4 + len;
      good = pos;
      const uint64_t seq = doc.at("seq").get<uint64_t>();
      if (seq <= snapshot_seq) continue;
      apply(doc.at("rec"));
      seq_ = seq;
      ++since_snapshot_;
    }
    if (good != bytes.size()) {
      if (::truncate(log_path.c_str(), static_cast<off_t>(good)) != 0) raise_errno("truncate journal");
    }
  }
  open_log();
}

void Journal::append(const Json& record) {
  std::lock_guard lock(mu_);
  if (!log_.valid()) open_log();
  const uint64_t seq = seq_ + 1;
  const std::string frame = wire::encode_frame(Json{{"seq", seq}, {"rec", record}}.dump());
  size_t done = 0;
  while (done < frame.size()) {
    const ssize_t n = ::write(log_.get(), frame.data() + done, frame.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      raise_errno("append journal");
    }
    done += static_cast<size_t>(n);
  }
  if (options_.sync && ::fdatasync(log_.get()) != 0) raise_errno("fsync journal");
  seq_ = seq;
  ++since_snapshot_;
}

bool Journal::snapshot_due() const {
  return options_.snapshot_every != 0 && since_snapshot_ >= options_.snapshot_every;
}

void Journal::write_snapshot(const Json& state) {
  std::lock_guard lock(mu_);
  const fs::path tmp = dir_ / "snapshot.tmp";
  {
    net::UniqueFd fd(::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644));
    if (!fd.valid()) raise_errno("open snapshot");
    const std::string frame = wire::encode_frame(Json{{"seq", seq_}, {"state", state}}.dump());
    wire::write_full(fd.get(), frame.data(), frame.size());
    if (options_.sync) ::fsync(fd.get());
  }
  fs::rename(tmp, dir_ / "snapshot");
  if (options_.sync) fsync_directory(dir_);
  // Records up to seq_ are covered by the snapshot; replay skips them if the
  // truncate below is lost.
  log_.reset();
  if (::truncate((dir_ / "journal.log").c_str(), 0) != 0 && errno != ENOENT) raise_errno("truncate journal");
  open_log();
  since_snapshot_ = 0;
}

}  // namespace castor
