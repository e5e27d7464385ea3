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

#include <atomic>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "castor/ns/service.hpp"
#include "castor/rfio/disk_client.hpp"
#include "castor/stager/service.hpp"

// POSIX-style access to castor files: metadata from the name server, space
// and tape from the stager, bytes from the disk server holding the copy.
namespace castor::rfio {

enum class Mode { kRead, kWrite };
enum class Whence { kSet, kCur, kEnd };

struct ClientOptions {
  std::shared_ptr<Connector> connector;
  ns::RouteTable ns_routes;
  std::string stager_address;
  std::string pool;  // empty: the stager's default pool
};

class RemoteHandle {
 public:
  RemoteHandle(uint64_t id, std::string path, Mode mode, stager::Location location,
               std::shared_ptr<Connector> connector, stager::StagerClient* stager);
  ~RemoteHandle();
  RemoteHandle(const RemoteHandle&) = delete;
  RemoteHandle& operator=(const RemoteHandle&) = delete;

  uint64_t id() const { return id_; }
  const std::string& path() const { return path_; }
  Mode mode() const { return mode_; }
  uint64_t position() const { return position_; }
  const stager::Location& location() const { return location_; }

  // Returns min(buf.size(), size - position) bytes.
  size_t read(std::span<std::byte> buf);
  size_t write(std::span<const std::byte> data);
  uint64_t lseek(int64_t offset, Whence whence);
  uint64_t size();
  // Data extents of the disk copy within [offset, offset+length).
  std::vector<fileio::Extent> extents(uint64_t offset, uint64_t length);
  // A write handle signals put_done; its digest is returned.
  fileio::Digest close();

 private:
  DiskSession& session();

  uint64_t id_;
  std::string path_;
  Mode mode_;
  stager::Location location_;
  std::shared_ptr<Connector> connector_;
  stager::StagerClient* stager_;
  std::unique_ptr<DiskSession> session_;
  uint64_t position_ = 0;
  uint64_t size_ = 0;
};

class RfioClient {
 public:
  explicit RfioClient(ClientOptions options);

  std::unique_ptr<RemoteHandle> rf_open(const std::string& path, Mode mode, uint64_t size_hint = 0);
  ns::NsEntry rf_stat(const std::string& path);

  ns::NsClient& ns() { return ns_; }
  stager::StagerClient& stager() { return stager_; }

 private:
  ClientOptions options_;
  ns::NsClient ns_;
  stager::StagerClient stager_;
  std::atomic<uint64_t> next_handle_{1};
};

bool is_castor_path(std::string_view path);

struct CopyResult {
  uint64_t bytes = 0;
  uint32_t crc32 = 0;
  double seconds = 0;
};

// Copies local or castor files in either direction, carrying holes over as
// holes. Memory use is one buffer of `buffer_bytes`.
CopyResult rfcp(RfioClient& client, const std::string& src, const std::string& dst, size_t buffer_bytes = 1 << 20);

}  // namespace castor::rfio
