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

#include "castor/mover/drive.hpp"

#include <cstdlib>

#include "castor/common/clock.hpp"
#include "castor/common/error.hpp"

namespace castor::mover {

std::string_view direction_name(Direction d) { return d == Direction::kDiskToTape ? "DISK_TO_TAPE" : "TAPE_TO_DISK"; }

Direction parse_direction(std::string_view s) {
  if (s == "DISK_TO_TAPE") return Direction::kDiskToTape;
  if (s == "TAPE_TO_DISK") return Direction::kTapeToDisk;
  raise(Errc::kInvalidArgument, "unknown direction '" + std::string(s) + "'");
}

SimulatedDrive::SimulatedDrive(std::string name, std::string model, DriveTiming timing, TapeStore& store,
                               DiskAccess& disk)
    : name_(std::move(name)), model_(std::move(model)), timing_(timing), store_(store), disk_(disk) {
  if (timing_.streaming_rate_bytes_per_s <= 0) raise(Errc::kInvalidArgument, "drive needs a positive rate");
}

double SimulatedDrive::do_mount(const std::string& vid) {
  if (mounted_) raise(Errc::kAlreadyMounted, name_ + " already holds " + *mounted_);
  mounted_ = vid;
  head_ = 1;
  clock_us_ += seconds_to_us(timing_.mount_seconds);
  return timing_.mount_seconds;
}

double SimulatedDrive::do_unmount() {
  if (!mounted_) raise(Errc::kNotMounted, name_ + " holds no volume");
  mounted_.reset();
  clock_us_ += seconds_to_us(timing_.unmount_seconds);
  return timing_.unmount_seconds;
}

void SimulatedDrive::mount(const std::string& vid) {
  std::lock_guard lock(mu_);
  do_mount(vid);
}

void SimulatedDrive::unmount() {
  std::lock_guard lock(mu_);
  do_unmount();
}

std::optional<std::string> SimulatedDrive::mounted_vid() const {
  std::lock_guard lock(mu_);
  return mounted_;
}

uint32_t SimulatedDrive::head() const {
  std::lock_guard lock(mu_);
  return head_;
}

int64_t SimulatedDrive::clock_us() const {
  std::lock_guard lock(mu_);
  return clock_us_;
}

void SimulatedDrive::sync_clock(int64_t t_us) {
  std::lock_guard lock(mu_);
  if (t_us > clock_us_) clock_us_ = t_us;
}

TransferReport SimulatedDrive::run_job(const TransferJob& job) {
  if (job.size_bytes == 0) raise(Errc::kInvalidArgument, "transfer jobs carry at least one byte");
  if (job.fseq == 0) raise(Errc::kInvalidArgument, "fseq is 1-based");
  if (job.vid.empty() || job.disk_path.empty()) raise(Errc::kInvalidArgument, "job needs a vid and a disk path");
  std::lock_guard lock(mu_);
  if (!ring_) ring_ = std::make_unique<BufferRing>(timing_.n_buffers, timing_.buffer_bytes);
  TransferReport report;
  report.job_id = job.job_id;
  report.drive = name_;
  report.start_us = clock_us_;
  const int64_t t0 = clock_us_;
  if (mounted_ != job.vid) {
    if (mounted_) report.mount_s += do_unmount();
    report.mount_s += do_mount(job.vid);
  }
  const uint32_t distance = job.fseq > head_ ? job.fseq - head_ : head_ - job.fseq;
  report.position_s = distance * timing_.position_seconds_per_fseq;
  head_ = job.fseq;
  report = job.direction == Direction::kDiskToTape ? write_tape(job, report) : read_tape(job, report);
  head_ = job.fseq + 1;
  report.sim_elapsed_s = report.mount_s + report.position_s + report.stream_s;
  clock_us_ = t0 + seconds_to_us(report.sim_elapsed_s);
  report.end_us = clock_us_;
  return report;
}

TransferReport SimulatedDrive::write_tape(const TransferJob& job, TransferReport report) {
  if (job.volume_capacity != 0 && store_.bytes_before(job.vid, job.fseq) + job.size_bytes > job.volume_capacity) {
    raise(Errc::kVolumeFull, job.vid + " cannot hold " + std::to_string(job.size_bytes) + " more bytes at fseq " +
                                 std::to_string(job.fseq));
  }
  auto source = disk_.open_source(job.disk_server, job.disk_path, job.disk_offset, job.size_bytes);
  store_.truncate_from(job.vid, job.fseq);
  LocalFileSink sink(store_.file_path(job.vid, job.fseq), 0, true, true);
  const Rates rates{timing_.disk_rate_bytes_per_s, timing_.streaming_rate_bytes_per_s, timing_.realtime_factor};
  const PipelineResult r = pipeline_copy(*source, sink, *ring_, rates);
  if (job.expected_checksum && *job.expected_checksum != r.crc32) {
    raise(Errc::kChecksumMismatch, job.disk_path + " does not match its expected checksum");
  }
  store_.record(job.vid, TapeFileInfo{job.fseq, r.bytes, r.crc32});
  report.bytes = r.bytes;
  report.crc32 = r.crc32;
  report.stream_s = r.sim_seconds;
  return report;
}

TransferReport SimulatedDrive::read_tape(const TransferJob& job, TransferReport report) {
  const auto info = store_.lookup(job.vid, job.fseq);
  if (!info) raise(Errc::kNoSuchFseq, job.vid + " has no fseq " + std::to_string(job.fseq));
  if (info->size != job.size_bytes) {
    raise(Errc::kSizeMismatch, job.vid + "/" + std::to_string(job.fseq) + " holds " + std::to_string(info->size) +
                                   " bytes, job wants " + std::to_string(job.size_bytes));
  }
  std::unique_ptr<LocalFileSource> source;
  try {
    source = std::make_unique<LocalFileSource>(store_.file_path(job.vid, job.fseq), 0, info->size);
  } catch (const CastorError& e) {
    if (e.code() == Errc::kNotFound) raise(Errc::kNoSuchFseq, e.detail());
    throw;
  }
  auto sink = disk_.open_sink(job.disk_server, job.disk_path, job.disk_offset, false);
  const Rates rates{timing_.streaming_rate_bytes_per_s, timing_.disk_rate_bytes_per_s, timing_.realtime_factor};
  const PipelineResult r = pipeline_copy(*source, *sink, *ring_, rates);
  const uint32_t expected = job.expected_checksum.value_or(info->crc32);
  if (r.crc32 != expected) {
    raise(Errc::kChecksumMismatch, job.vid + "/" + std::to_string(job.fseq) + " read back with a bad checksum");
  }
  report.bytes = r.bytes;
  report.crc32 = r.crc32;
  report.stream_s = r.sim_seconds;
  return report;
}

void to_json(Json& j, const TransferJob& job) {
  j = Json{{"job_id", job.job_id},
           {"direction", direction_name(job.direction)},
           {"vid", job.vid},
           {"fseq", job.fseq},
           {"size_bytes", job.size_bytes},
           {"disk_server", job.disk_server},
           {"disk_path", job.disk_path},
           {"disk_offset", job.disk_offset},
           {"volume_capacity", job.volume_capacity}};
  j["expected_checksum"] = job.expected_checksum ? Json(*job.expected_checksum) : Json();
}

void from_json(const Json& j, TransferJob& job) {
  job.job_id = j.value("job_id", uint64_t{0});
  job.direction = parse_direction(j.at("direction").get<std::string>());
  job.vid = j.at("vid").get<std::string>();
  job.fseq = j.at("fseq").get<uint32_t>();
  job.size_bytes = j.at("size_bytes").get<uint64_t>();
  job.disk_server = j.value("disk_server", std::string());
  job.disk_path = j.at("disk_path").get<std::string>();
  job.disk_offset = j.value("disk_offset", uint64_t{0});
  job.volume_capacity = j.value("volume_capacity", uint64_t{0});
  job.expected_checksum.reset();
  if (j.contains("expected_checksum") && !j["expected_checksum"].is_null()) {
    job.expected_checksum = j["expected_checksum"].get<uint32_t>();
  }
}

void to_json(Json& j, const TransferReport& r) {
  j = Json{{"job_id", r.job_id},     {"drive", r.drive},           {"bytes", r.bytes},
           {"crc32", r.crc32},       {"sim_elapsed_s", r.sim_elapsed_s}, {"mount_s", r.mount_s},
           {"position_s", r.position_s}, {"stream_s", r.stream_s},   {"start_us", r.start_us},
           {"end_us", r.end_us}};
}

void from_json(const Json& j, TransferReport& r) {
  r.job_id = j.at("job_id").get<uint64_t>();
  r.drive = j.at("drive").get<std::string>();
  r.bytes = j.at("bytes").get<uint64_t>();
  r.crc32 = j.at("crc32").get<uint32_t>();
  r.sim_elapsed_s = j.at("sim_elapsed_s").get<double>();
  r.mount_s = j.at("mount_s").get<double>();
  r.position_s = j.at("position_s").get<double>();
  r.stream_s = j.at("stream_s").get<double>();
  r.start_us = j.at("start_us").get<int64_t>();
  r.end_us = j.at("end_us").get<int64_t>();
}

}  // namespace castor::mover
