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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "castor/common/net.hpp"

// Sparse-aware file helpers. Holes are found with SEEK_DATA/SEEK_HOLE and are
// never materialized: checksums fold them in with crc32::extend_zeros and
// writers leave them as holes.
namespace castor::fileio {

struct Extent {
  uint64_t offset = 0;
  uint64_t length = 0;
};

struct Digest {
  uint64_t size = 0;
  uint32_t crc32 = 0;
};

net::UniqueFd open_read(const std::filesystem::path& path);
net::UniqueFd open_write(const std::filesystem::path& path, bool truncate);

uint64_t size_of(int fd);

// Ranges inside [offset, offset + length) that may contain non-zero bytes.
std::vector<Extent> data_extents(int fd, uint64_t offset, uint64_t length);

// Reads up to buf.size() bytes at offset; returns the count (short only at EOF).
size_t pread_upto(int fd, std::span<std::byte> buf, uint64_t offset);
void pwrite_all(int fd, std::span<const std::byte> data, uint64_t offset);

// Writes data at offset, but all-zero 4 KiB blocks at or past EOF are skipped
// so they stay holes; the file still ends at offset + data.size() or later.
void write_sparse(int fd, std::span<const std::byte> data, uint64_t offset);

// Grows the file to `size` if shorter (new range reads as zeros).
void extend_to(int fd, uint64_t size);

Digest digest(int fd);
Digest digest(const std::filesystem::path& path);

}  // namespace castor::fileio
