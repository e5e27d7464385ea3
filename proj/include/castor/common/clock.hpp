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
#include <cstdint>

namespace castor {

inline constexpr int64_t kMicrosPerSecond = 1'000'000;

inline int64_t seconds_to_us(double s) { return static_cast<int64_t>(s * 1e6 + (s >= 0 ? 0.5 : -0.5)); }
inline double us_to_seconds(int64_t us) { return static_cast<double>(us) / 1e6; }

class Clock {
 public:
  virtual ~Clock() = default;
  virtual int64_t now_us() const = 0;
};

class WallClock final : public Clock {
 public:
  int64_t now_us() const override;
};

// Time only moves when told to; drives the simulation harness and tests.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(int64_t start_us = 0) : now_(start_us) {}
  int64_t now_us() const override { return now_.load(); }
  void set_us(int64_t t) { now_.store(t); }
  void advance_us(int64_t dt) { now_.fetch_add(dt); }

 private:
  std::atomic<int64_t> now_;
};

}  // namespace castor
