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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

// Length-prefixed framing shared by every daemon, the rfio data channel and the
// journals: a 4-byte big-endian unsigned length followed by that many bytes.
namespace castor::wire {

inline constexpr uint32_t kMaxFrameBytes = 256u << 20;

void put_u32(std::string& out, uint32_t v);
void put_u64(std::string& out, uint64_t v);
uint32_t get_u32(std::string_view in, size_t pos);
uint64_t get_u64(std::string_view in, size_t pos);

std::string encode_frame(std::string_view body);

// Incremental decoder for byte streams that may split frames anywhere.
class FrameDecoder {
 public:
  void feed(std::string_view bytes) { buffer_.append(bytes); }
  std::optional<std::string> next();
  size_t buffered() const { return buffer_.size() - consumed_; }

 private:
  std::string buffer_;
  size_t consumed_ = 0;
};

// Blocking fd helpers. read_frame returns false on a clean EOF at a frame
// boundary and throws kProtocolError / kEnvironmentDown otherwise.
bool read_frame(int fd, std::string& body);
void write_frame(int fd, std::string_view body);

bool read_full(int fd, void* buf, size_t len);
void write_full(int fd, const void* buf, size_t len);

}  // namespace castor::wire
