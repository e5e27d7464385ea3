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

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "castor/common/file_io.hpp"
#include "castor/rfio/protocol.hpp"

namespace castor::rfio {

// Control operations on a disk server.
class DiskClient {
 public:
  explicit DiskClient(std::shared_ptr<Transport> transport);

  fileio::Digest checksum(const std::string& path);
  bool remove(const std::string& path);
  void mkdirs(const std::string& path);
  // Regular files directly inside `dir` with their sizes.
  std::vector<std::pair<std::string, uint64_t>> list(const std::string& dir);
  std::vector<fileio::Extent> extents(const std::string& path, uint64_t offset, uint64_t length);
  uint64_t size(const std::string& path);

 private:
  RpcClient rpc_;
};

// One open file on a disk server over its own connection; closing the
// connection releases the handle.
class DiskSession {
 public:
  DiskSession(std::shared_ptr<Transport> transport, const std::string& path, OpenMode mode);
  ~DiskSession();
  DiskSession(const DiskSession&) = delete;
  DiskSession& operator=(const DiskSession&) = delete;

  uint64_t handle_id() const { return handle_; }
  const std::string& path() const { return path_; }

  // Reads up to buf.size() bytes at offset; short only at EOF.
  size_t read(uint64_t offset, std::span<std::byte> buf);
  void write(uint64_t offset, std::span<const std::byte> data);
  uint64_t size();
  uint64_t close();

 private:
  DataFrame exchange(const DataFrame& request);

  std::shared_ptr<Transport> transport_;
  std::string path_;
  uint64_t handle_ = 0;
  bool open_ = false;
};

}  // namespace castor::rfio
