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

#include "castor/mover/disk_io.hpp"

#include <unistd.h>

#include <algorithm>

#include "castor/common/error.hpp"

namespace castor::mover {

namespace {

// Clips absolute extents to the buffer window and makes them relative.
void set_extents(Buffer& buf, const std::vector<fileio::Extent>& absolute, uint64_t base) {
  buf.extents.clear();
  const uint64_t lo = base + buf.offset;
  const uint64_t hi = lo + buf.length;
  for (const auto& e : absolute) {
    const uint64_t a = std::max(e.offset, lo);
    const uint64_t b = std::min(e.offset + e.length, hi);
    if (a < b) buf.extents.push_back({a - lo, b - a});
  }
}

}  // namespace

LocalFileSource::LocalFileSource(const std::filesystem::path& path, uint64_t offset, uint64_t length)
    : fd_(fileio::open_read(path)), offset_(offset), length_(length) {
  const uint64_t have = fileio::size_of(fd_.get());
  if (have < offset + length) {
    raise(Errc::kSourceTruncated, path.string() + " holds " + std::to_string(have) + " bytes, need " +
                                      std::to_string(offset + length));
  }
}

void LocalFileSource::fill(Buffer& buf) {
  set_extents(buf, fileio::data_extents(fd_.get(), offset_ + buf.offset, buf.length), offset_);
  for (const auto& e : buf.extents) {
    const size_t got = fileio::pread_upto(fd_.get(), buf.bytes.subspan(e.offset, e.length), offset_ + buf.offset + e.offset);
    if (got != e.length) raise(Errc::kSourceTruncated, "source shrank during the copy");
  }
}

LocalFileSink::LocalFileSink(const std::filesystem::path& path, uint64_t offset, bool truncate, bool sync)
    : fd_(fileio::open_write(path, truncate)), offset_(offset), sync_(sync) {}

void LocalFileSink::put(const Buffer& buf) {
  for (const auto& e : buf.extents) {
    fileio::write_sparse(fd_.get(), buf.bytes.subspan(e.offset, e.length), offset_ + buf.offset + e.offset);
  }
}

void LocalFileSink::finish(uint64_t total) {
  fileio::extend_to(fd_.get(), offset_ + total);
  if (sync_ && ::fdatasync(fd_.get()) != 0) raise_errno("fdatasync");
}

RemoteSource::RemoteSource(const Connector& connector, const std::string& server, const std::string& path,
                           uint64_t offset, uint64_t length)
    : control_(connector.connect(server)),
      session_(connector.connect(server), path, rfio::OpenMode::kRead),
      offset_(offset),
      length_(length) {
  const uint64_t have = session_.size();
  if (have < offset + length) {
    raise(Errc::kSourceTruncated, path + " holds " + std::to_string(have) + " bytes, need " +
                                      std::to_string(offset + length));
  }
}

void RemoteSource::fill(Buffer& buf) {
  set_extents(buf, control_.extents(session_.path(), offset_ + buf.offset, buf.length), offset_);
  for (const auto& e : buf.extents) {
    const size_t got = session_.read(offset_ + buf.offset + e.offset, buf.bytes.subspan(e.offset, e.length));
    if (got != e.length) raise(Errc::kSourceTruncated, "source shrank during the copy");
  }
}

RemoteSink::RemoteSink(const Connector& connector, const std::string& server, const std::string& path,
                       uint64_t offset, bool truncate)
    : session_(connector.connect(server), path, truncate ? rfio::OpenMode::kWriteTruncate : rfio::OpenMode::kWrite),
      offset_(offset) {}

void RemoteSink::put(const Buffer& buf) {
  for (const auto& e : buf.extents) session_.write(offset_ + buf.offset + e.offset, buf.bytes.subspan(e.offset, e.length));
}

void RemoteSink::finish(uint64_t total) {
  const uint64_t end = offset_ + total;
  if (total > 0 && session_.size() < end) {
    // A zero byte at or past EOF only moves the end of file.
    const std::byte zero{0};
    session_.write(end - 1, std::span(&zero, 1));
  }
  session_.close();
}

std::unique_ptr<Source> LocalDiskAccess::open_source(const std::string&, const std::string& path, uint64_t offset,
                                                     uint64_t length) {
  return std::make_unique<LocalFileSource>(path, offset, length);
}

std::unique_ptr<Sink> LocalDiskAccess::open_sink(const std::string&, const std::string& path, uint64_t offset,
                                                 bool truncate) {
  return std::make_unique<LocalFileSink>(path, offset, truncate);
}

std::unique_ptr<Source> RemoteDiskAccess::open_source(const std::string& server, const std::string& path,
                                                      uint64_t offset, uint64_t length) {
  return std::make_unique<RemoteSource>(*connector_, server, path, offset, length);
}

std::unique_ptr<Sink> RemoteDiskAccess::open_sink(const std::string& server, const std::string& path, uint64_t offset,
                                                  bool truncate) {
  return std::make_unique<RemoteSink>(*connector_, server, path, offset, truncate);
}

}  // namespace castor::mover
