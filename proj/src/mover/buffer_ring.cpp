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

#include "castor/mover/buffer_ring.hpp"

#include "castor/common/error.hpp"

namespace castor::mover {

BufferRing::BufferRing(size_t n_buffers, size_t buffer_bytes) : buffer_bytes_(buffer_bytes) {
  if (n_buffers < 2 || buffer_bytes == 0) raise(Errc::kInvalidArgument, "ring needs at least 2 non-empty buffers");
  // Left uninitialized: pages are only touched for data that is really copied.
  storage_.reset(new std::byte[n_buffers * buffer_bytes]);
  slots_.resize(n_buffers);
  for (size_t i = 0; i < n_buffers; ++i) slots_[i].bytes = std::span(storage_.get() + i * buffer_bytes, buffer_bytes);
  states_.assign(n_buffers, State::kEmpty);
}

void BufferRing::reset() {
  std::lock_guard lock(mu_);
  produced_ = consumed_ = 0;
  finished_ = aborted_ = false;
  in_flight_ = 0;
  states_.assign(slots_.size(), State::kEmpty);
  for (auto& s : slots_) {
    s.offset = 0;
    s.length = 0;
    s.extents.clear();
    s.produced_at = s.consumed_at = 0;
  }
}

Buffer* BufferRing::acquire_empty() {
  std::unique_lock lock(mu_);
  const size_t i = produced_ % slots_.size();
  cv_.wait(lock, [&] { return aborted_ || states_[i] == State::kEmpty; });
  if (aborted_) return nullptr;
  states_[i] = State::kFilling;
  ++in_flight_;
  if (in_flight_ > max_in_flight_) max_in_flight_ = in_flight_;
  if (in_flight_ > slots_.size()) ++violations_;
  slots_[i].extents.clear();
  return &slots_[i];
}

void BufferRing::publish(Buffer* buf) {
  {
    std::lock_guard lock(mu_);
    const size_t i = produced_ % slots_.size();
    if (buf != &slots_[i] || states_[i] != State::kFilling) ++violations_;
    states_[i] = State::kFull;
    ++produced_;
  }
  cv_.notify_all();
}

void BufferRing::finish() {
  {
    std::lock_guard lock(mu_);
    finished_ = true;
  }
  cv_.notify_all();
}

Buffer* BufferRing::acquire_full() {
  std::unique_lock lock(mu_);
  const size_t i = consumed_ % slots_.size();
  cv_.wait(lock, [&] { return aborted_ || states_[i] == State::kFull || (finished_ && consumed_ == produced_); });
  if (aborted_ || states_[i] != State::kFull) return nullptr;
  states_[i] = State::kDraining;
  return &slots_[i];
}

void BufferRing::release(Buffer* buf) {
  {
    std::lock_guard lock(mu_);
    const size_t i = consumed_ % slots_.size();
    if (buf != &slots_[i] || states_[i] != State::kDraining) ++violations_;
    states_[i] = State::kEmpty;
    --in_flight_;
    ++consumed_;
  }
  cv_.notify_all();
}

void BufferRing::abort() {
  {
    std::lock_guard lock(mu_);
    aborted_ = true;
  }
  cv_.notify_all();
}

}  // namespace castor::mover
