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
#include <memory>
#include <string>

#include "castor/common/net.hpp"
#include "castor/common/transport.hpp"
#include "castor/mover/pipeline.hpp"
#include "castor/rfio/disk_client.hpp"

namespace castor::mover {

// [offset, offset + length) of a local file; holes are reported, not read.
class LocalFileSource final : public Source {
 public:
  LocalFileSource(const std::filesystem::path& path, uint64_t offset, uint64_t length);
  uint64_t size() const override { return length_; }
  void fill(Buffer& buf) override;

 private:
  net::UniqueFd fd_;
  uint64_t offset_;
  uint64_t length_;
};

// Writes the stream at `offset` of a local file, leaving zero ranges as holes.
class LocalFileSink final : public Sink {
 public:
  LocalFileSink(const std::filesystem::path& path, uint64_t offset, bool truncate, bool sync = false);
  void put(const Buffer& buf) override;
  void finish(uint64_t total) override;

 private:
  net::UniqueFd fd_;
  uint64_t offset_;
  bool sync_;
};

// The same over the disk-server protocol.
class RemoteSource final : public Source {
 public:
  RemoteSource(const Connector& connector, const std::string& server, const std::string& path, uint64_t offset,
               uint64_t length);
  uint64_t size() const override { return length_; }
  void fill(Buffer& buf) override;

 private:
  rfio::DiskClient control_;
  rfio::DiskSession session_;
  uint64_t offset_;
  uint64_t length_;
};

class RemoteSink final : public Sink {
 public:
  RemoteSink(const Connector& connector, const std::string& server, const std::string& path, uint64_t offset,
             bool truncate);
  void put(const Buffer& buf) override;
  void finish(uint64_t total) override;

 private:
  rfio::DiskSession session_;
  uint64_t offset_;
};

// How a mover reaches disk files: server address plus physical path.
class DiskAccess {
 public:
  virtual ~DiskAccess() = default;
  virtual std::unique_ptr<Source> open_source(const std::string& server, const std::string& path, uint64_t offset,
                                              uint64_t length) = 0;
  virtual std::unique_ptr<Sink> open_sink(const std::string& server, const std::string& path, uint64_t offset,
                                          bool truncate) = 0;
};

// Ignores the server and uses the local filesystem.
class LocalDiskAccess final : public DiskAccess {
 public:
  std::unique_ptr<Source> open_source(const std::string& server, const std::string& path, uint64_t offset,
                                      uint64_t length) override;
  std::unique_ptr<Sink> open_sink(const std::string& server, const std::string& path, uint64_t offset,
                                  bool truncate) override;
};

class RemoteDiskAccess final : public DiskAccess {
 public:
  explicit RemoteDiskAccess(std::shared_ptr<Connector> connector) : connector_(std::move(connector)) {}
  std::unique_ptr<Source> open_source(const std::string& server, const std::string& path, uint64_t offset,
                                      uint64_t length) override;
  std::unique_ptr<Sink> open_sink(const std::string& server, const std::string& path, uint64_t offset,
                                  bool truncate) override;

 private:
  std::shared_ptr<Connector> connector_;
};

}  // namespace castor::mover
