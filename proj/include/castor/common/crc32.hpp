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
#include <span>
#include <string_view>

// CRC-32 as used by Ethernet/zip: reflected polynomial 0xEDB88320, initial
// register 0xFFFFFFFF, final xor 0xFFFFFFFF. All functions take and return the
// finalized value, so the CRC of an empty message is 0 and calls chain.
namespace castor::crc32 {

uint32_t update(uint32_t crc, std::span<const std::byte> data);

// One table lookup per byte; kept as the reference the sliced kernel is
// checked against.
uint32_t update_bytewise(uint32_t crc, std::span<const std::byte> data);

// CRC after appending `count` zero bytes, in O(log count).
uint32_t extend_zeros(uint32_t crc, uint64_t count);

// CRC of A||B given crc(A), crc(B) and len(B).
uint32_t combine(uint32_t crc_a, uint32_t crc_b, uint64_t len_b);

inline uint32_t of(std::string_view text) {
  return update(0, std::as_bytes(std::span(text.data(), text.size())));
}

bool all_zero(std::span<const std::byte> data);

class Crc32 {
 public:
  void update(std::span<const std::byte> data) {
    value_ = crc32::update(value_, data);
    length_ += data.size();
  }
  void update_zeros(uint64_t count) {
    value_ = extend_zeros(value_, count);
    length_ += count;
  }
  uint32_t value() const { return value_; }
  uint64_t length() const { return length_; }

 private:
  uint32_t value_ = 0;
  uint64_t length_ = 0;
};

}  // namespace castor::crc32
