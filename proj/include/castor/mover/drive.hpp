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

#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "castor/common/rpc.hpp"
#include "castor/mover/disk_io.hpp"
#include "castor/mover/tape_store.hpp"

namespace castor::mover {

enum class Direction { kDiskToTape, kTapeToDisk };

std::string_view direction_name(Direction d);
Direction parse_direction(std::string_view s);

struct TransferJob {
  uint64_t job_id = 0;
  Direction direction = Direction::kDiskToTape;
  std::string vid;
  uint32_t fseq = 1;
  uint64_t size_bytes = 0;
  std::optional<uint32_t> expected_checksum;
  // Disk side: server address, physical path and the byte range of the file
  // this tape file holds (files may span several tape files).
  std::string disk_server;
  std::string disk_path;
  uint64_t disk_offset = 0;
  // Writes: cartridge capacity; 0 means unlimited.
  uint64_t volume_capacity = 0;
};

struct TransferReport {
  uint64_t job_id = 0;
  std::string drive;
  uint64_t bytes = 0;
  uint32_t crc32 = 0;
  double sim_elapsed_s = 0;
  double mount_s = 0;  // includes unmounting a previous volume
  double position_s = 0;
  double stream_s = 0;
  int64_t start_us = 0;
  int64_t end_us = 0;
};

struct DriveTiming {
  double mount_seconds = 60;
  double unmount_seconds = 30;
  double position_seconds_per_fseq = 0.1;
  double streaming_rate_bytes_per_s = 30e6;
  double disk_rate_bytes_per_s = 0;  // 0: disk never limits
  double realtime_factor = 0;
  size_t n_buffers = kDefaultBuffers;
  size_t buffer_bytes = kDefaultBufferBytes;
};

// A tape drive on its own virtual clock. The head sits at fseq 1 after a
// mount and after fseq k once file k was read or written.
class SimulatedDrive {
 public:
  SimulatedDrive(std::string name, std::string model, DriveTiming timing, TapeStore& store, DiskAccess& disk);

  const std::string& name() const { return name_; }
  const std::string& model() const { return model_; }
  const DriveTiming& timing() const { return timing_; }

  void mount(const std::string& vid);
  void unmount();
  std::optional<std::string> mounted_vid() const;
  uint32_t head() const;

  int64_t clock_us() const;
  // Moves the drive clock forward to t (never backwards).
  void sync_clock(int64_t t_us);

  TransferReport run_job(const TransferJob& job);

 private:
  double do_mount(const std::string& vid);
  double do_unmount();
  TransferReport write_tape(const TransferJob& job, TransferReport report);
  TransferReport read_tape(const TransferJob& job, TransferReport report);

  std::string name_;
  std::string model_;
  DriveTiming timing_;
  TapeStore& store_;
  DiskAccess& disk_;
  mutable std::mutex mu_;
  std::unique_ptr<BufferRing> ring_;
  std::optional<std::string> mounted_;
  uint32_t head_ = 1;
  int64_t clock_us_ = 0;
};

void to_json(Json& j, const TransferJob& job);
void from_json(const Json& j, TransferJob& job);
void to_json(Json& j, const TransferReport& r);
void from_json(const Json& j, TransferReport& r);

}  // namespace castor::mover
