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

#include "castor/common/crc32.hpp"

#include <array>
#include <bit>
#include <cstring>

namespace castor::crc32 {
namespace {

static_assert(std::endian::native == std::endian::little, "sliced kernel assumes little-endian loads");

constexpr uint32_t kPoly = 0xEDB88320u;

using Tables = std::array<std::array<uint32_t, 256>, 8>;

constexpr Tables make_tables() {
  Tables t{};
  for (uint32_t n = 0; n < 256; ++n) {
    uint32_t c = n;
    for (int k = 0; k < 8; ++k) c = (c & 1) ? (c >> 1) ^ kPoly : c >> 1;
    t[0][n] = c;
  }
  for (uint32_t n = 0; n < 256; ++n) {
    for (int s = 1; s < 8; ++s) t[s][n] = (t[s - 1][n] >> 8) ^ t[0][t[s - 1][n] & 0xFF];
  }
  return t;
}

constexpr Tables kTables = make_tables();

// Polynomial product a*b mod P in the reflected domain (x^0 is bit 31).
uint32_t multiply_mod(uint32_t a, uint32_t b) {
  uint32_t m = 1u << 31;
  uint32_t p = 0;
  while (m != 0) {
    if (a & m) {
      p ^= b;
      if ((a & (m - 1)) == 0) break;
    }
    m >>= 1;
    b = (b & 1) ? (b >> 1) ^ kPoly : b >> 1;
  }
  return p;
}

// x^(2^k) mod P for k = 0..63.
std::array<uint32_t, 64> make_power_table() {
  std::array<uint32_t, 64> t{};
  uint32_t p = 1u << 30;  // x^1
  t[0] = p;
  for (size_t n = 1; n < t.size(); ++n) t[n] = p = multiply_mod(p, p);
  return t;
}

const std::array<uint32_t, 64>& power_table() {
  static const auto table = make_power_table();
  return table;
}

// x^(8*count) mod P: the operator that shifts a register over `count` zero bytes.
uint32_t zero_bytes_operator(uint64_t count) {
  const auto& powers = power_table();
  uint32_t p = 1u << 31;  // x^0
  unsigned k = 3;
  while (count != 0) {
    if (count & 1) p = multiply_mod(powers[k & 63], p);
    count >>= 1;
    ++k;
  }
  return p;
}

}  // namespace

uint32_t update_bytewise(uint32_t crc, std::span<const std::byte> data) {
  uint32_t c = ~crc;
  for (std::byte b : data) c = (c >> 8) ^ kTables[0][(c ^ static_cast<uint8_t>(b)) & 0xFF];
  return ~c;
}

uint32_t update(uint32_t crc, std::span<const std::byte> data) {
  uint32_t c = ~crc;
  const auto* p = reinterpret_cast<const uint8_t*>(data.data());
  size_t n = data.size();
  while (n >= 8) {
    uint32_t lo;
    uint32_t hi;
    std::memcpy(&lo, p, 4);
    std::memcpy(&hi, p + 4, 4);
    lo ^= c;
    c = kTables[7][lo & 0xFF] ^ kTables[6][(lo >> 8) & 0xFF] ^ kTables[5][(lo >> 16) & 0xFF] ^
        kTables[4][lo >> 24] ^ kTables[3][hi & 0xFF] ^ kTables[2][(hi >> 8) & 0xFF] ^
        kTables[1][(hi >> 16) & 0xFF] ^ kTables[0][hi >> 24];
    p += 8;
    n -= 8;
  }
  while (n-- != 0) c = (c >> 8) ^ kTables[0][(c ^ *p++) & 0xFF];
  return ~c;
}

uint32_t extend_zeros(uint32_t crc, uint64_t count) {
  if (count == 0) return crc;
  return multiply_mod(zero_bytes_operator(count), ~crc) ^ 0xFFFFFFFFu;
}

uint32_t combine(uint32_t crc_a, uint32_t crc_b, uint64_t len_b) {
  return multiply_mod(zero_bytes_operator(len_b), crc_a) ^ crc_b;
}

bool all_zero(std::span<const std::byte> data) {
  const auto* p = reinterpret_cast<const unsigned char*>(data.data());
  size_t n = data.size();
  while (n >= 8) {
    uint64_t w;
    std::memcpy(&w, p, 8);
    if (w != 0) return false;
    p += 8;
    n -= 8;
  }
  while (n-- != 0) {
    if (*p++ != 0) return false;
  }
  return true;
}

}  // namespace castor::crc32
