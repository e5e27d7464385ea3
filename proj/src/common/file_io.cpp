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

#include "castor/common/file_io.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>

#include "castor/common/crc32.hpp"
#include "castor/common/error.hpp"

namespace castor::fileio {

net::UniqueFd open_read(const std::filesystem::path& path) {
  net::UniqueFd fd(::open(path.c_str(), O_RDONLY | O_CLOEXEC));
  if (!fd.valid()) {
    if (errno == ENOENT) raise(Errc::kNotFound, path.string());
    raise_errno("open " + path.string());
  }
  return fd;
}

net::UniqueFd open_write(const std::filesystem::path& path, bool truncate) {
  int flags = O_RDWR | O_CREAT | O_CLOEXEC;
  if (truncate) flags |= O_TRUNC;
  net::UniqueFd fd(::open(path.c_str(), flags, 0644));
  if (!fd.valid()) {
    if (errno == ENOENT) raise(Errc::kNotFound, path.string());
    raise_errno("open " + path.string());
  }
  return fd;
}

uint64_t size_of(int fd) {
  struct stat st {};
  if (::fstat(fd, &st) != 0) raise_errno("fstat");
  return static_cast<uint64_t>(st.st_size);
}

std::vector<Extent> data_extents(int fd, uint64_t offset, uint64_t length) {
  std::vector<Extent> out;
  const uint64_t end = std::min(offset + length, size_of(fd));
  uint64_t pos = offset;
  while (pos < end) {
    const off_t data = ::lseek(fd, static_cast<off_t>(pos), SEEK_DATA);
    if (data < 0) {
      if (errno == ENXIO) break;  // only a hole remains
      // Filesystem without hole reporting: treat the rest as data.
      out.push_back({pos, end - pos});
      break;
    }
    if (static_cast<uint64_t>(data) >= end) break;
    off_t hole = ::lseek(fd, data, SEEK_HOLE);
    if (hole < 0) hole = static_cast<off_t>(end);
    const uint64_t stop = std::min<uint64_t>(static_cast<uint64_t>(hole), end);
    out.push_back({static_cast<uint64_t>(data), stop - static_cast<uint64_t>(data)});
    pos = stop;
  }
  return out;
}

size_t pread_upto(int fd, std::span<std::byte> buf, uint64_t offset) {
  size_t done = 0;
  while (done < buf.size()) {
    const ssize_t n = ::pread(fd, buf.data() + done, buf.size() - done, static_cast<off_t>(offset + done));
    if (n < 0) {
      if (errno == EINTR) continue;
      raise_errno("pread");
    }
    if (n == 0) break;
    done += static_cast<size_t>(n);
  }
  return done;
}

void pwrite_all(int fd, std::span<const std::byte> data, uint64_t offset) {
  size_t done = 0;
  while (done < data.size()) {
    const ssize_t n = ::pwrite(fd, data.data() + done, data.size() - done, static_cast<off_t>(offset + done));
    if (n < 0) {
      if (errno == EINTR) continue;
      raise_errno("pwrite");
    }
    done += static_cast<size_t>(n);
  }
}

void extend_to(int fd, uint64_t size) {
  if (size_of(fd) < size && ::ftruncate(fd, static_cast<off_t>(size)) != 0) raise_errno("ftruncate");
}

void write_sparse(int fd, std::span<const std::byte> data, uint64_t offset) {
  if (data.empty()) return;
  constexpr size_t kBlock = 4096;
  const uint64_t eof = size_of(fd);
  size_t run_start = 0;
  size_t pos = 0;
  auto flush = [&](size_t stop) {
    if (stop > run_start) pwrite_all(fd, data.subspan(run_start, stop - run_start), offset + run_start);
  };
  while (pos < data.size()) {
    // Blocks end on file-offset multiples of kBlock.
    const size_t len = std::min<size_t>(data.size() - pos, kBlock - (offset + pos) % kBlock);
    const auto block = data.subspan(pos, len);
    if (offset + pos >= eof && crc32::all_zero(block)) {
      flush(pos);
      run_start = pos + len;
    }
    pos += len;
  }
  flush(data.size());
  extend_to(fd, offset + data.size());
}

Digest digest(int fd) {
  Digest d;
  d.size = size_of(fd);
  crc32::Crc32 crc;
  std::vector<std::byte> buf(1 << 20);
  uint64_t pos = 0;
  for (const Extent& e : data_extents(fd, 0, d.size)) {
    crc.update_zeros(e.offset - pos);
    uint64_t off = e.offset;
    const uint64_t stop = e.offset + e.length;
    while (off < stop) {
      const size_t want = static_cast<size_t>(std::min<uint64_t>(buf.size(), stop - off));
      const size_t got = pread_upto(fd, std::span(buf.data(), want), off);
      if (got == 0) break;
      crc.update(std::span<const std::byte>(buf.data(), got));
      off += got;
    }
    pos = off;
  }
  crc.update_zeros(d.size - pos);
  d.crc32 = crc.value();
  return d;
}

Digest digest(const std::filesystem::path& path) {
  auto fd = open_read(path);
  return digest(fd.get());
}

}  // namespace castor::fileio
