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
#include <memory>
#include <string>
#include <string_view>

#include "castor/common/rpc.hpp"

// Disk-server channel. Every frame body starts with a marker byte: 0x00 for a
// JSON control message, 0x01 for a binary data frame with a 17-byte header
// (opcode u8, handle_id u64 BE, offset u64 BE) followed by the payload.
namespace castor::rfio {

inline constexpr uint8_t kMarkerJson = 0x00;
inline constexpr uint8_t kMarkerData = 0x01;
inline constexpr size_t kHeaderBytes = 17;
inline constexpr size_t kMaxPayload = 1 << 20;

enum class Opcode : uint8_t { kOpen = 1, kRead = 2, kWrite = 3, kLseek = 4, kClose = 5, kStat = 6 };

enum class OpenMode : uint8_t { kRead = 0, kWrite = 1, kWriteTruncate = 2 };

// OPEN: payload = mode byte + physical path; reply offset = file size.
// READ: offset = position, payload = u32 BE byte count; reply payload = bytes.
// WRITE: offset = position, payload = bytes; reply offset = position after.
// LSEEK, STAT, CLOSE: reply offset = file size.
struct DataFrame {
  Opcode opcode = Opcode::kStat;
  uint64_t handle_id = 0;
  uint64_t offset = 0;
  std::string payload;
};

std::string encode_data(const DataFrame& frame);
std::string encode_json(const Json& message);
bool is_data(std::string_view body);
DataFrame decode_data(std::string_view body);
std::string_view strip_marker(std::string_view body);

// Adapts a disk-server transport for RpcClient: adds and strips the JSON marker.
class JsonChannel final : public Transport {
 public:
  explicit JsonChannel(std::shared_ptr<Transport> inner) : inner_(std::move(inner)) {}
  std::string roundtrip(std::string_view body) override;
  const std::string& address() const override { return inner_->address(); }

 private:
  std::shared_ptr<Transport> inner_;
};

}  // namespace castor::rfio
