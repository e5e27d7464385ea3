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

#include "castor/mover/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <thread>

#include "castor/common/crc32.hpp"
#include "castor/common/error.hpp"

namespace castor::mover {

namespace {

double stage_time(uint64_t bytes, double rate) { return rate > 0 ? static_cast<double>(bytes) / rate : 0.0; }

}  // namespace

uint32_t buffer_crc(uint32_t crc, const Buffer& buf) {
  uint64_t pos = 0;
  for (const auto& e : buf.extents) {
    crc = crc32::extend_zeros(crc, e.offset - pos);
    crc = crc32::update(crc, buf.bytes.subspan(e.offset, e.length));
    pos = e.offset + e.length;
  }
  return crc32::extend_zeros(crc, buf.length - pos);
}

PipelineResult pipeline_copy(Source& source, Sink& sink, BufferRing& ring, const Rates& rates) {
  ring.reset();
  const uint64_t size = source.size();
  std::exception_ptr producer_error;
  std::exception_ptr consumer_error;

  std::thread producer([&] {
    try {
      double last_p = 0;
      for (uint64_t off = 0; off < size;) {
        Buffer* buf = ring.acquire_empty();
        if (buf == nullptr) return;
        buf->offset = off;
        buf->length = static_cast<size_t>(std::min<uint64_t>(ring.buffer_bytes(), size - off));
        source.fill(*buf);
        last_p = std::max(last_p, buf->consumed_at) + stage_time(buf->length, rates.source_bytes_per_s);
        buf->produced_at = last_p;
        off += buf->length;
        ring.publish(buf);
      }
      ring.finish();
    } catch (...) {
      producer_error = std::current_exception();
      ring.abort();
    }
  });

  PipelineResult result;
  const auto wall_start = std::chrono::steady_clock::now();
  try {
    uint32_t crc = 0;
    double last_c = 0;
    while (Buffer* buf = ring.acquire_full()) {
      last_c = std::max(last_c, buf->produced_at) + stage_time(buf->length, rates.sink_bytes_per_s);
      buf->consumed_at = last_c;
      if (rates.realtime_factor > 0) {
        std::this_thread::sleep_until(wall_start + std::chrono::duration<double>(last_c * rates.realtime_factor));
      }
      crc = buffer_crc(crc, *buf);
      try {
        sink.put(*buf);
      } catch (const CastorError& e) {
        if (e.code() == Errc::kIoError) raise(Errc::kSinkError, e.detail());
        throw;
      }
      result.bytes += buf->length;
      ring.release(buf);
    }
    if (!producer_error && result.bytes == size) {
      try {
        sink.finish(size);
      } catch (const CastorError& e) {
        if (e.code() == Errc::kIoError) raise(Errc::kSinkError, e.detail());
        throw;
      }
    }
    result.crc32 = crc;
    result.sim_seconds = last_c;
  } catch (...) {
    consumer_error = std::current_exception();
    ring.abort();
  }
  producer.join();
  if (producer_error) std::rethrow_exception(producer_error);
  if (consumer_error) std::rethrow_exception(consumer_error);
  if (result.bytes != size) raise(Errc::kSourceTruncated, "pipeline ended early");
  return result;
}

double analytic_duration(uint64_t size, size_t buffer_bytes, const Rates& rates) {
  if (size == 0) return 0;
  // max over k of: chunks 1..k through the source, then chunks k..m through
  // the sink.
  const uint64_t chunks = (size + buffer_bytes - 1) / buffer_bytes;
  double best = 0;
  auto candidate = [&](uint64_t k) {
    const uint64_t through_k = k == chunks ? size : k * buffer_bytes;
    const uint64_t before_k = (k - 1) * buffer_bytes;
    best = std::max(best, stage_time(through_k, rates.source_bytes_per_s) +
                              stage_time(size - before_k, rates.sink_bytes_per_s));
  };
  // Equal-sized chunks make the path length linear in k up to the last chunk,
  // so the maximum sits at an end point.
  candidate(1);
  if (chunks > 1) {
    candidate(chunks - 1);
    candidate(chunks);
  }
  return best;
}

}  // namespace castor::mover
