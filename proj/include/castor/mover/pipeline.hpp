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
#include <vector>

#include "castor/mover/buffer_ring.hpp"

namespace castor::mover {

// Produces a stream of known size chunk by chunk.
class Source {
 public:
  virtual ~Source() = default;
  virtual uint64_t size() const = 0;
  // Fills buf.bytes for [buf.offset, buf.offset + buf.length) and lists the
  // ranges that may hold non-zero bytes in buf.extents.
  virtual void fill(Buffer& buf) = 0;
};

class Sink {
 public:
  virtual ~Sink() = default;
  virtual void put(const Buffer& buf) = 0;
  // Called once after the last buffer; total is the stream size.
  virtual void finish(uint64_t total) = 0;
};

struct Rates {
  double source_bytes_per_s = 0;  // 0: instantaneous
  double sink_bytes_per_s = 0;
  // > 0: also sleep so that wall time tracks simulated time times this factor.
  double realtime_factor = 0;
};

struct PipelineResult {
  uint64_t bytes = 0;
  uint32_t crc32 = 0;
  double sim_seconds = 0;
};

// Copies source to sink through the ring with one producer and one consumer
// thread. Simulated time follows the two-stage recurrence
//   P_i = max(P_{i-1}, C_{i-n}) + b_i / r_s,  C_i = max(C_{i-1}, P_i) + b_i / r_k
// where slot reuse supplies C_{i-n}.
PipelineResult pipeline_copy(Source& source, Sink& sink, BufferRing& ring, const Rates& rates);

// Closed form for the same transfer: the critical path through a two-stage
// flow line over the chunk sequence.
double analytic_duration(uint64_t size, size_t buffer_bytes, const Rates& rates);

uint32_t buffer_crc(uint32_t crc, const Buffer& buf);

}  // namespace castor::mover
