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

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "castor/common/file_io.hpp"

namespace castor::mover {

inline constexpr size_t kDefaultBuffers = 8;
inline constexpr size_t kDefaultBufferBytes = 4u << 20;

// One slot of the ring. Only bytes inside `extents` are meaningful; the rest of
// [0, length) is zeros that were never materialized.
struct Buffer {
  std::span<std::byte> bytes;
  uint64_t offset = 0;  // stream offset of bytes[0]
  size_t length = 0;
  std::vector<fileio::Extent> extents;  // relative to offset, sorted
  double produced_at = 0;               // simulated seconds
  double consumed_at = 0;

  void set_all_data() { extents.assign(1, fileio::Extent{0, length}); }
};

// Fixed set of buffers handed out in strict rotation: the producer fills slot
// i mod n, the consumer drains it, and the producer may only reuse it after
// the consumer released it.
class BufferRing {
 public:
  explicit BufferRing(size_t n_buffers = kDefaultBuffers, size_t buffer_bytes = kDefaultBufferBytes);

  size_t n_buffers() const { return slots_.size(); }
  size_t buffer_bytes() const { return buffer_bytes_; }

  // Producer side. nullptr once the ring was aborted.
  Buffer* acquire_empty();
  void publish(Buffer* buf);
  void finish();

  // Consumer side. nullptr at end of stream or after abort.
  Buffer* acquire_full();
  void release(Buffer* buf);

  void abort();
  // Back to the initial state for the next transfer.
  void reset();

  // Instrumentation: most slots simultaneously filling, full or draining, and
  // out-of-order state changes seen (always 0 unless the ring is misused).
  size_t max_in_flight() const { return max_in_flight_; }
  uint64_t violations() const { return violations_; }

 private:
  enum class State { kEmpty, kFilling, kFull, kDraining };

  std::unique_ptr<std::byte[]> storage_;
  size_t buffer_bytes_;
  std::vector<Buffer> slots_;
  std::vector<State> states_;
  std::mutex mu_;
  std::condition_variable cv_;
  uint64_t produced_ = 0;
  uint64_t consumed_ = 0;
  bool finished_ = false;
  bool aborted_ = false;
  size_t in_flight_ = 0;
  std::atomic<size_t> max_in_flight_{0};
  std::atomic<uint64_t> violations_{0};
};

}  // namespace castor::mover
