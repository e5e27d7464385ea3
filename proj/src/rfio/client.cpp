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

#include "castor/rfio/client.hpp"

#include <chrono>
#include <optional>
#include <vector>

#include "castor/common/crc32.hpp"
#include "castor/common/error.hpp"
#include "castor/common/file_io.hpp"

namespace castor::rfio {

RemoteHandle::RemoteHandle(uint64_t id, std::string path, Mode mode, stager::Location location,
                           std::shared_ptr<Connector> connector, stager::StagerClient* stager)
    : id_(id),
      path_(std::move(path)),
      mode_(mode),
      location_(std::move(location)),
      connector_(std::move(connector)),
      stager_(stager) {
  session_ = std::make_unique<DiskSession>(connector_->connect(location_.address), location_.path,
                                           mode_ == Mode::kRead ? OpenMode::kRead : OpenMode::kWriteTruncate);
  size_ = session_->size();
}

RemoteHandle::~RemoteHandle() = default;

DiskSession& RemoteHandle::session() {
  if (!session_) raise(Errc::kBadHandle, "handle " + std::to_string(id_) + " is closed");
  return *session_;
}

uint64_t RemoteHandle::size() {
  size_ = std::max(size_, session().size());
  return size_;
}

size_t RemoteHandle::read(std::span<std::byte> buf) {
  auto& s = session();
  if (mode_ != Mode::kRead) raise(Errc::kBadHandle, "handle " + std::to_string(id_) + " is write-only");
  // A writer may still be growing the file.
  if (position_ + buf.size() > size_) size_ = s.size();
  const uint64_t want = size_ > position_ ? std::min<uint64_t>(buf.size(), size_ - position_) : 0;
  size_t done = 0;
  while (done < want) {
    const size_t chunk = std::min<uint64_t>(want - done, kMaxPayload);
    const size_t got = s.read(position_ + done, buf.subspan(done, chunk));
    done += got;
    if (got < chunk) break;
  }
  position_ += done;
  return done;
}

size_t RemoteHandle::write(std::span<const std::byte> data) {
  auto& s = session();
  if (mode_ != Mode::kWrite) raise(Errc::kBadHandle, "handle " + std::to_string(id_) + " is read-only");
  size_t done = 0;
  while (done < data.size()) {
    const size_t chunk = std::min<size_t>(data.size() - done, kMaxPayload);
    s.write(position_ + done, data.subspan(done, chunk));
    done += chunk;
  }
  position_ += done;
  size_ = std::max(size_, position_);
  return done;
}

uint64_t RemoteHandle::lseek(int64_t offset, Whence whence) {
  session();
  int64_t base = 0;
  switch (whence) {
    case Whence::kSet:
      base = 0;
      break;
    case Whence::kCur:
      base = static_cast<int64_t>(position_);
      break;
    case Whence::kEnd:
      base = static_cast<int64_t>(size());
      break;
  }
  const int64_t target = base + offset;
  if (target < 0) raise(Errc::kNegativePosition, "seek to " + std::to_string(target));
  if (mode_ == Mode::kRead && static_cast<uint64_t>(target) > size()) {
    raise(Errc::kInvalidArgument, "seek past end of file opened for read");
  }
  position_ = static_cast<uint64_t>(target);
  return position_;
}

std::vector<fileio::Extent> RemoteHandle::extents(uint64_t offset, uint64_t length) {
  session();
  return DiskClient(connector_->connect(location_.address)).extents(location_.path, offset, length);
}

fileio::Digest RemoteHandle::close() {
  session().close();
  session_.reset();
  if (mode_ == Mode::kWrite) return stager_->put_done(path_);
  return fileio::Digest{size_, 0};
}

RfioClient::RfioClient(ClientOptions options)
    : options_(std::move(options)),
      ns_(options_.ns_routes, options_.connector),
      stager_(options_.connector->connect(options_.stager_address)) {}

std::unique_ptr<RemoteHandle> RfioClient::rf_open(const std::string& path, Mode mode, uint64_t size_hint) {
  const uint64_t id = next_handle_++;
  if (mode == Mode::kRead) {
    const auto loc = stager_.stage_in(path, true, options_.pool);
    return std::make_unique<RemoteHandle>(id, path, mode, loc, options_.connector, &stager_);
  }
  const auto loc = stager_.stage_out(path, size_hint, options_.pool);
  return std::make_unique<RemoteHandle>(id, path, mode, loc, options_.connector, &stager_);
}

ns::NsEntry RfioClient::rf_stat(const std::string& path) { return ns_.stat(path); }

bool is_castor_path(std::string_view path) { return path.rfind("/castor/", 0) == 0 || path == "/castor"; }

namespace {

// Either end of a copy.
class End {
 public:
  virtual ~End() = default;
  virtual uint64_t size() = 0;
  virtual std::vector<fileio::Extent> extents(uint64_t size) = 0;
  virtual size_t read(uint64_t offset, std::span<std::byte> buf) = 0;
  virtual void write(uint64_t offset, std::span<const std::byte> data) = 0;
  virtual void finish(uint64_t size) = 0;
};

class LocalEnd final : public End {
 public:
  LocalEnd(const std::string& path, bool write)
      : fd_(write ? fileio::open_write(path, true) : fileio::open_read(path)) {}
  uint64_t size() override { return fileio::size_of(fd_.get()); }
  std::vector<fileio::Extent> extents(uint64_t size) override { return fileio::data_extents(fd_.get(), 0, size); }
  size_t read(uint64_t offset, std::span<std::byte> buf) override { return fileio::pread_upto(fd_.get(), buf, offset); }
  void write(uint64_t offset, std::span<const std::byte> data) override { fileio::write_sparse(fd_.get(), data, offset); }
  void finish(uint64_t size) override { fileio::extend_to(fd_.get(), size); }

 private:
  net::UniqueFd fd_;
};

class CastorEnd final : public End {
 public:
  CastorEnd(RfioClient& client, const std::string& path, bool write, uint64_t size_hint)
      : handle_(client.rf_open(path, write ? Mode::kWrite : Mode::kRead, size_hint)) {}
  uint64_t size() override { return handle_->size(); }
  std::vector<fileio::Extent> extents(uint64_t size) override { return handle_->extents(0, size); }
  size_t read(uint64_t offset, std::span<std::byte> buf) override {
    handle_->lseek(static_cast<int64_t>(offset), Whence::kSet);
    return handle_->read(buf);
  }
  void write(uint64_t offset, std::span<const std::byte> data) override {
    handle_->lseek(static_cast<int64_t>(offset), Whence::kSet);
    handle_->write(data);
  }
  void finish(uint64_t size) override {
    if (handle_->mode() == Mode::kWrite && size > handle_->size()) {
      // A zero byte past the end extends the file without allocating.
      const std::byte zero{0};
      handle_->lseek(static_cast<int64_t>(size - 1), Whence::kSet);
      handle_->write(std::span(&zero, 1));
    }
    handle_->close();
  }

 private:
  std::unique_ptr<RemoteHandle> handle_;
};

std::unique_ptr<End> open_end(RfioClient& client, const std::string& path, bool write, uint64_t size_hint) {
  if (is_castor_path(path)) return std::make_unique<CastorEnd>(client, path, write, size_hint);
  return std::make_unique<LocalEnd>(path, write);
}

}  // namespace

CopyResult rfcp(RfioClient& client, const std::string& src, const std::string& dst, size_t buffer_bytes) {
  const auto started = std::chrono::steady_clock::now();
  auto in = open_end(client, src, false, 0);
  const uint64_t size = in->size();
  auto out = open_end(client, dst, true, size);
  std::vector<std::byte> buf(std::max<size_t>(buffer_bytes, 4096));
  crc32::Crc32 crc;
  uint64_t pos = 0;
  for (const auto& e : in->extents(size)) {
    crc.update_zeros(e.offset - pos);
    uint64_t off = e.offset;
    const uint64_t end = e.offset + e.length;
    while (off < end) {
      const size_t want = std::min<uint64_t>(buf.size(), end - off);
      const size_t got = in->read(off, std::span(buf).first(want));
      if (got != want) raise(Errc::kSourceTruncated, src + " shrank during copy");
      out->write(off, std::span(buf).first(got));
      crc.update(std::span(buf).first(got));
      off += got;
    }
    pos = end;
  }
  crc.update_zeros(size - pos);
  out->finish(size);
  in->finish(size);
  CopyResult r;
  r.bytes = size;
  r.crc32 = crc.value();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return r;
}

}  // namespace castor::rfio
