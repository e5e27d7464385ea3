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

#include "castor/common/frame.hpp"

#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>

#include "castor/common/error.hpp"

namespace castor::wire {

void put_u32(std::string& out, uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xFF));
}

void put_u64(std::string& out, uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xFF));
}

uint32_t get_u32(std::string_view in, size_t pos) {
  if (pos + 4 > in.size()) raise(Errc::kProtocolError, "short u32");
  uint32_t v = 0;
  for (size_t i = 0; i < 4; ++i) v = (v << 8) | static_cast<uint8_t>(in[pos + i]);
  return v;
}

uint64_t get_u64(std::string_view in, size_t pos) {
  if (pos + 8 > in.size()) raise(Errc::kProtocolError, "short u64");
  uint64_t v = 0;
  for (size_t i = 0; i < 8; ++i) v = (v << 8) | static_cast<uint8_t>(in[pos + i]);
  return v;
}

std::string encode_frame(std::string_view body) {
  if (body.size() > kMaxFrameBytes) raise(Errc::kProtocolError, "frame too large");
  std::string out;
  out.reserve(body.size() + 4);
  put_u32(out, static_cast<uint32_t>(body.size()));
  out.append(body);
  return out;
}

std::optional<std::string> FrameDecoder::next() {
  std::string_view pending(buffer_);
  pending.remove_prefix(consumed_);
  if (pending.size() < 4) return std::nullopt;
  const uint32_t len = get_u32(pending, 0);
  if (len > kMaxFrameBytes) raise(Errc::kProtocolError, "frame too large");
  if (pending.size() < 4 + static_cast<size_t>(len)) return std::nullopt;
  std::string body(pending.substr(4, len));
  consumed_ += 4 + len;
  if (consumed_ == buffer_.size()) {
    buffer_.clear();
    consumed_ = 0;
  }
  return body;
}

bool read_full(int fd, void* buf, size_t len) {
  auto* p = static_cast<char*>(buf);
  size_t done = 0;
  while (done < len) {
    const ssize_t n = ::read(fd, p + done, len - done);
    if (n == 0) {
      if (done == 0) return false;
      raise(Errc::kEnvironmentDown, "peer closed mid-frame");
    }
    if (n < 0) {
      if (errno == EINTR) continue;
      raise(Errc::kEnvironmentDown, "read failed");
    }
    done += static_cast<size_t>(n);
  }
  return true;
}

void write_full(int fd, const void* buf, size_t len) {
  const auto* p = static_cast<const char*>(buf);
  size_t done = 0;
  while (done < len) {
    const ssize_t n = ::send(fd, p + done, len - done, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      if (errno == ENOTSOCK) {
        const ssize_t w = ::write(fd, p + done, len - done);
        if (w < 0) {
          if (errno == EINTR) continue;
          raise(Errc::kEnvironmentDown, "write failed");
        }
        done += static_cast<size_t>(w);
        continue;
      }
      raise(Errc::kEnvironmentDown, "send failed");
    }
    done += static_cast<size_t>(n);
  }
}

bool read_frame(int fd, std::string& body) {
  unsigned char prefix[4];
  if (!read_full(fd, prefix, 4)) return false;
  const uint32_t len = (uint32_t{prefix[0]} << 24) | (uint32_t{prefix[1]} << 16) |
                       (uint32_t{prefix[2]} << 8) | uint32_t{prefix[3]};
  if (len > kMaxFrameBytes) raise(Errc::kProtocolError, "frame too large");
  body.resize(len);
  if (len != 0 && !read_full(fd, body.data(), len)) {
    raise(Errc::kEnvironmentDown, "peer closed mid-frame");
  }
  return true;
}

void write_frame(int fd, std::string_view body) {
  if (body.size() > kMaxFrameBytes) raise(Errc::kProtocolError, "frame too large");
  std::string prefix;
  put_u32(prefix, static_cast<uint32_t>(body.size()));
  if (body.size() <= (64u << 10)) {
    prefix.append(body);
    write_full(fd, prefix.data(), prefix.size());
    return;
  }
  write_full(fd, prefix.data(), prefix.size());
  write_full(fd, body.data(), body.size());
}

}  // namespace castor::wire
