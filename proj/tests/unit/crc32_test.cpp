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

#include <gtest/gtest.h>
#include <zlib.h>

#include <random>
#include <vector>

namespace castor::crc32 {
namespace {

// zlib's crc32 is the independent published implementation the kernels are
// checked against.
uint32_t zlib_crc(uint32_t crc, std::span<const std::byte> data) {
  return static_cast<uint32_t>(
      ::crc32(crc, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
}

std::vector<std::byte> random_bytes(std::mt19937_64& rng, size_t n) {
  std::vector<std::byte> v(n);
  for (auto& b : v) b = static_cast<std::byte>(rng() & 0xFF);
  return v;
}

TEST(Crc32Test, CheckValue) {
  EXPECT_EQ(of("123456789"), 0xCBF43926u);
  const std::string s = "123456789";
  EXPECT_EQ(zlib_crc(0, std::as_bytes(std::span(s.data(), s.size()))), 0xCBF43926u);
  EXPECT_EQ(of(""), 0u);
}

TEST(Crc32Test, SlicedMatchesBytewiseAndZlib) {
  std::mt19937_64 rng(7);
  for (size_t n : {0, 1, 7, 8, 9, 15, 16, 63, 64, 65, 1000, 4096, 65537}) {
    const auto data = random_bytes(rng, n);
    for (size_t skew = 0; skew < 8 && skew <= n; ++skew) {
      const auto part = std::span<const std::byte>(data).subspan(skew);
      const uint32_t ref = zlib_crc(0, part);
      EXPECT_EQ(update(0, part), ref) << n << "/" << skew;
      EXPECT_EQ(update_bytewise(0, part), ref) << n << "/" << skew;
    }
  }
}

TEST(Crc32Test, ChainedUpdatesEqualOneShot) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto data = random_bytes(rng, rng() % 5000);
    const size_t cut = data.empty() ? 0 : rng() % data.size();
    const std::span<const std::byte> all(data);
    EXPECT_EQ(update(update(0, all.first(cut)), all.subspan(cut)), zlib_crc(0, all));
  }
}

TEST(Crc32Test, ZeroExtensionMatchesMaterializedZeros) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto prefix = random_bytes(rng, rng() % 300);
    const size_t zeros = rng() % 20000;
    std::vector<std::byte> full = prefix;
    full.resize(prefix.size() + zeros, std::byte{0});
    EXPECT_EQ(extend_zeros(update(0, prefix), zeros), zlib_crc(0, full));
  }
  EXPECT_EQ(extend_zeros(0x12345678u, 0), 0x12345678u);
}

TEST(Crc32Test, CombineMatchesZlib) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_bytes(rng, rng() % 2000);
    const auto b = random_bytes(rng, rng() % 2000);
    const uint32_t ca = zlib_crc(0, a);
    const uint32_t cb = zlib_crc(0, b);
    EXPECT_EQ(combine(ca, cb, b.size()), static_cast<uint32_t>(::crc32_combine64(ca, cb, b.size())));
  }
}

TEST(Crc32Test, HugeZeroRunAgreesWithZlibCombine) {
  // 3 GiB of zeros: zlib's combine with the CRC of a smaller zero block, doubled.
  std::vector<std::byte> block(1 << 20, std::byte{0});
  uint32_t ref = 0;
  const uint32_t block_crc = zlib_crc(0, block);
  for (int i = 0; i < 3072; ++i) ref = static_cast<uint32_t>(::crc32_combine64(ref, block_crc, block.size()));
  EXPECT_EQ(extend_zeros(0, 3ull << 30), ref);
}

TEST(Crc32Test, AllZero) {
  std::vector<std::byte> v(100, std::byte{0});
  EXPECT_TRUE(all_zero(v));
  v[99] = std::byte{1};
  EXPECT_FALSE(all_zero(v));
  EXPECT_TRUE(all_zero({}));
}

}  // namespace
}  // namespace castor::crc32
