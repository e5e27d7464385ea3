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

#include "castor/tools/challenge.hpp"

#include <algorithm>
#include <cmath>
#include <spdlog/fmt/fmt.h>
#include <random>
#include <span>

#include "castor/common/crc32.hpp"
#include "castor/common/error.hpp"
#include "castor/common/file_io.hpp"
#include "castor/site/site.hpp"

namespace castor::challenge {

namespace {

constexpr double kUs = 1e6;

const char* kAliceScaled = R"(# Central data recording into ten 30 MB/s drives, written faster than
# the drives can stream so the tape side stays saturated.
[workload]
name = "alice-scaled"
duration_s = 3600
interval_s = 300
seed = 2003

[plant]
reserve_fraction = 0.01

[model.9940B]
drives = 10
servers = 5
streaming_rate_bytes_per_s = 30_000_000
mount_seconds = 60.0
position_seconds_per_fseq = 0.1
capacity_bytes = 200_000_000_000

[pool.cdr]
model = "9940B"
vid_prefix = "C"
count = 40

[stream.cdr]
kind = "WRITE"
file_size_bytes = 1_073_741_824
files = 0
target_rate_bytes_per_s = 360_000_000

[diskpool.cdr]
filesystems = ["lxfsrk01:/srv/cdr0:200000000000000", "lxfsrk02:/srv/cdr1:200000000000000", "lxfsrk03:/srv/cdr2:200000000000000", "lxfsrk04:/srv/cdr3:200000000000000"]
tape_pool = "cdr"
migration_threshold_bytes = 1_073_741_824
migration_max_age_s = 300
migration_streams = 10
)";

const char* kCompassScaled = R"(# One experiment stream at 45 MB/s into the default plant.
[workload]
name = "compass-scaled"
duration_s = 3600
interval_s = 300
seed = 2002
plant = "default"

[stream.compass]
kind = "WRITE"
file_size_bytes = 1_073_741_824
files = 0
target_rate_bytes_per_s = 45_000_000

[diskpool.compass]
filesystems = ["lxfsrc01:/srv/compass0:20000000000000", "lxfsrc02:/srv/compass1:20000000000000"]
tape_pool = "default"
migration_threshold_bytes = 1
migration_max_age_s = 300
migration_streams = 4
)";

const char* kEmpty = R"([workload]
name = "empty"
duration_s = 60
interval_s = 60
seed = 1
plant = "default"

[diskpool.default]
filesystems = ["lxfs01:/srv/default0:1000000000000"]
)";

uint64_t mix(uint64_t a, uint64_t b) {
  uint64_t x = a * 0x9E3779B97F4A7C15ull + b + 0x632BE59BD9B4E019ull;
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Payload: a pseudo-random head of up to 4 KiB, zeros, and a nonzero last byte.
fileio::Digest write_payload(rfio::RfioClient& client, const std::string& path, uint64_t size, uint64_t seed) {
  auto h = client.rf_open(path, rfio::Mode::kWrite, size);
  std::mt19937_64 rng(seed);
  std::string head(std::min<uint64_t>(size, 4096), '\0');
  for (auto& c : head) c = static_cast<char>(rng() | 1);
  h->write(std::as_bytes(std::span(head.data(), head.size())));
  if (size > head.size()) {
    const std::byte marker{0x5A};
    h->lseek(static_cast<int64_t>(size - 1), rfio::Whence::kSet);
    h->write(std::span(&marker, 1));
  }
  return h->close();
}

struct Ack {
  std::string path;
  std::string pool;
  uint64_t file_id = 0;
  uint64_t size = 0;
  uint32_t crc32 = 0;
  int64_t t_us = 0;
};

StreamKind parse_kind(const std::string& s) {
  if (s == "WRITE") return StreamKind::kWrite;
  if (s == "READ") return StreamKind::kRead;
  raise(Errc::kSpecInvalid, "stream kind '" + s + "' is not WRITE or READ");
}

uint64_t get_u64(const Config& c, const std::string& section, const std::string& key, int64_t fallback) {
  const int64_t v = c.get_int(section, key, fallback);
  if (v < 0) raise(Errc::kSpecInvalid, section + "." + key + " is negative");
  return static_cast<uint64_t>(v);
}

bool is_lost(site::Site& site, const Ack& a) {
  if (auto copy = site.stager().copy_of(a.file_id); copy && !copy->writing &&
                                                    copy->state != stager::CopyState::kRecallPending &&
                                                    copy->state != stager::CopyState::kRecalling &&
                                                    copy->state != stager::CopyState::kInvalid) {
    try {
      const auto d = fileio::digest(std::filesystem::path(copy->path));
      if (d.size == a.size && d.crc32 == a.crc32) return false;
    } catch (const CastorError&) {
    }
  }
  ns::NsClient ns(site.routes(), site.connector());
  std::vector<ns::Segment> segs;
  for (const auto& s : ns.get_segments(a.file_id)) {
    if (s.copy_no == 1) segs.push_back(s);
  }
  std::sort(segs.begin(), segs.end(), [](const auto& x, const auto& y) { return x.seg_seq < y.seg_seq; });
  uint64_t total = 0;
  uint32_t crc = 0;
  for (const auto& s : segs) {
    const auto file = site.mover().store().file_path(s.vid, s.fseq);
    fileio::Digest d;
    try {
      d = fileio::digest(file);
    } catch (const CastorError&) {
      return true;
    }
    if (d.size != s.seg_size || d.crc32 != s.seg_checksum) return true;
    crc = crc32::combine(crc, d.crc32, d.size);
    total += d.size;
  }
  return segs.empty() || total != a.size || crc != a.crc32;
}

double overlap(double a0, double a1, double b0, double b1) { return std::max(0.0, std::min(a1, b1) - std::max(a0, b0)); }

class TempRoot {
 public:
  explicit TempRoot(std::filesystem::path given) {
    if (!given.empty()) {
      path_ = std::move(given);
      std::filesystem::create_directories(path_);
      return;
    }
    std::string tmpl = (std::filesystem::temp_directory_path() / "castor-challenge-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) raise_errno("mkdtemp");
    path_ = tmpl;
    owned_ = true;
  }
  ~TempRoot() {
    if (!owned_) return;
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  bool owned_ = false;
};

}  // namespace

std::vector<std::string> builtin_workloads() { return {"alice-scaled", "compass-scaled", "empty"}; }

std::string builtin_workload_text(const std::string& name) {
  if (name == "alice-scaled") return kAliceScaled;
  if (name == "compass-scaled") return kCompassScaled;
  if (name == "empty") return kEmpty;
  raise(Errc::kNotFound, "no built-in workload '" + name + "'");
}

WorkloadSpec parse_workload(const Config& config, const std::filesystem::path& base_dir) {
  WorkloadSpec w;
  const std::string ws = "workload";
  w.name = config.get_string(ws, "name", "workload");
  w.duration_s = config.get_double(ws, "duration_s", 0);
  w.interval_s = config.get_double(ws, "interval_s", 60);
  w.seed = get_u64(config, ws, "seed", 1);
  if (!(w.duration_s > 0)) raise(Errc::kSpecInvalid, "duration_s must be > 0");
  if (!(w.interval_s > 0)) raise(Errc::kSpecInvalid, "interval_s must be > 0");

  const std::string plant = config.get_string(ws, "plant", "");
  if (plant == "default" || (plant.empty() && config.sections_with_prefix("model.").empty())) {
    w.plant = vmgr::load_plant(Config::parse(default_plant_text()));
  } else if (plant.empty()) {
    w.plant = vmgr::load_plant(config);
  } else {
    std::filesystem::path p(plant);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    w.plant = vmgr::load_plant_file(p);
  }

  w.pools = stager::load_pools(config);
  if (w.pools.empty()) raise(Errc::kSpecInvalid, "workload has no [diskpool.*] section");
  for (const auto& p : w.pools) {
    const bool known = std::any_of(w.plant.pools.begin(), w.plant.pools.end(),
                                   [&](const auto& s) { return s.pool.name == p.tape_pool; });
    if (!known) raise(Errc::kSpecInvalid, "disk pool " + p.name + " uses unknown tape pool " + p.tape_pool);
  }

  for (const auto& section : config.sections_with_prefix("stream.")) {
    StreamSpec s;
    s.name = section.substr(std::string("stream.").size());
    s.kind = parse_kind(config.get_string(section, "kind", "WRITE"));
    s.file_size_bytes = get_u64(config, section, "file_size_bytes", 0);
    s.files = get_u64(config, section, "files", 0);
    s.target_rate_bytes_per_s = config.get_double(section, "target_rate_bytes_per_s", 0);
    s.start_offset_s = config.get_double(section, "start_offset_s", 0);
    s.pool = config.get_string(section, "pool", w.pools.front().name);
    if (s.file_size_bytes == 0) raise(Errc::kSpecInvalid, "stream " + s.name + ": file_size_bytes must be > 0");
    if (!(s.target_rate_bytes_per_s > 0)) raise(Errc::kSpecInvalid, "stream " + s.name + ": rate must be > 0");
    if (s.start_offset_s < 0) raise(Errc::kSpecInvalid, "stream " + s.name + ": start_offset_s is negative");
    const bool pool_known =
        std::any_of(w.pools.begin(), w.pools.end(), [&](const auto& p) { return p.name == s.pool; });
    if (!pool_known) raise(Errc::kSpecInvalid, "stream " + s.name + ": unknown disk pool " + s.pool);
    w.streams.push_back(std::move(s));
  }
  return w;
}

WorkloadSpec load_workload(const std::string& name_or_path) {
  const auto names = builtin_workloads();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) {
    return parse_workload(Config::parse(builtin_workload_text(name_or_path)));
  }
  const std::filesystem::path p(name_or_path);
  if (!std::filesystem::exists(p)) raise(Errc::kNotFound, "no workload file or built-in named '" + name_or_path + "'");
  return parse_workload(Config::load(p), p.parent_path());
}

ChallengeReport run_challenge(const WorkloadSpec& spec, const RunOptions& options) {
  ChallengeReport r;
  r.workload = spec.name;
  r.seed = spec.seed;
  r.duration_s = spec.duration_s;
  r.drives = spec.plant.total_drives();
  for (const auto& s : spec.streams) {
    r.streams.push_back(StreamTotals{s.name, s.kind == StreamKind::kWrite ? "WRITE" : "READ", 0, 0});
  }

  TempRoot root(options.work_dir);
  site::SiteOptions so;
  so.root = root.path();
  so.plant = spec.plant;
  so.pools = spec.pools;
  // Mounts are relocated under the run directory.
  for (auto& p : so.pools) {
    for (auto& fs : p.filesystems) fs.mount = (root.path() / "disk" / std::filesystem::path(fs.mount).relative_path()).string();
  }
  site::Site site(so);
  auto& stager = site.stager();

  std::map<std::string, std::unique_ptr<rfio::RfioClient>> clients;
  for (const auto& p : spec.pools) {
    auto co = site.client_options();
    co.pool = p.name;
    clients[p.name] = std::make_unique<rfio::RfioClient>(co);
  }
  auto& ns = clients.begin()->second->ns();
  const std::string base = "/castor/" + so.domain + "/user/challenge";
  ns.mkdir(base);
  for (const auto& s : spec.streams) {
    if (s.kind == StreamKind::kWrite) ns.mkdir(base + "/" + s.name);
  }

  const int64_t end_us = static_cast<int64_t>(std::llround(spec.duration_s * kUs));
  std::vector<uint64_t> issued(spec.streams.size(), 0);
  auto next_time = [&](size_t i) -> std::optional<int64_t> {
    const auto& s = spec.streams[i];
    if (s.files != 0 && issued[i] >= s.files) return std::nullopt;
    const double t = s.start_offset_s + static_cast<double>(issued[i] + 1) * static_cast<double>(s.file_size_bytes) /
                                            s.target_rate_bytes_per_s;
    const auto us = static_cast<int64_t>(std::llround(t * kUs));
    if (us > end_us) return std::nullopt;
    return us;
  };

  std::mt19937_64 pick(spec.seed);
  std::vector<Ack> acks;
  for (;;) {
    std::optional<int64_t> best;
    size_t who = 0;
    for (size_t i = 0; i < spec.streams.size(); ++i) {
      const auto t = next_time(i);
      if (t && (!best || *t < *best)) {
        best = t;
        who = i;
      }
    }
    if (!best) break;
    stager.advance_to(*best);
    const auto& s = spec.streams[who];
    const uint64_t index = issued[who]++;
    auto& client = *clients.at(s.pool);
    if (s.kind == StreamKind::kWrite) {
      const std::string path = fmt::format("{}/{}/f{:06d}", base, s.name, index);
      try {
        const auto d = write_payload(client, path, s.file_size_bytes, mix(mix(spec.seed, who), index));
        const auto entry = client.rf_stat(path);
        acks.push_back(Ack{path, s.pool, entry.file_id, d.size, d.crc32, *best});
        ++r.streams[who].files;
        r.streams[who].bytes += d.size;
      } catch (const CastorError& e) {
        if (e.code() == Errc::kEnvironmentDown || !is_user_error(e.code())) throw;
        ++r.rejected_writes;
      }
    } else {
      ++r.read_requests;
      if (acks.empty()) continue;
      const auto& a = acks[std::uniform_int_distribution<size_t>(0, acks.size() - 1)(pick)];
      clients.at(a.pool)->stager().stage_in(a.path, false, a.pool);
      ++r.streams[who].files;
      r.streams[who].bytes += a.size;
    }
  }
  stager.advance_to(end_us);

  for (const auto& a : acks) {
    ++r.acknowledged_files;
    r.acknowledged_bytes += a.size;
  }

  // Drain: let every pool's migrator finish the backlog, then settle recalls.
  // Jobs that straddle the window end count only for their part inside it.
  for (const auto& p : spec.pools) stager.run_migrator(p.name);
  stager.run_until_idle();
  r.drain_s = static_cast<double>(stager.now_us() - end_us) / kUs;

  const auto transfers = stager.transfers();
  const double dur = spec.duration_s;
  const size_t n_intervals = static_cast<size_t>(std::ceil(dur / spec.interval_s - 1e-9));
  r.intervals.resize(n_intervals);
  for (size_t k = 0; k < n_intervals; ++k) {
    r.intervals[k].start_s = static_cast<double>(k) * spec.interval_s;
    r.intervals[k].end_s = std::min(dur, static_cast<double>(k + 1) * spec.interval_s);
  }
  std::vector<double> interval_bytes(n_intervals, 0);
  double window_bytes = 0;
  for (const auto& t : transfers) {
    const double e = static_cast<double>(t.end_us) / kUs;
    const double s = e - t.stream_s;
    if (t.stream_s <= 0) {
      if (e <= dur) window_bytes += static_cast<double>(t.bytes);
      continue;
    }
    const double rate = static_cast<double>(t.bytes) / t.stream_s;
    window_bytes += rate * overlap(s, e, 0, dur);
    for (size_t k = 0; k < n_intervals; ++k) {
      interval_bytes[k] += rate * overlap(s, e, r.intervals[k].start_s, r.intervals[k].end_s);
    }
  }
  for (size_t k = 0; k < n_intervals; ++k) {
    auto& iv = r.intervals[k];
    iv.tape_bytes = static_cast<uint64_t>(std::llround(interval_bytes[k]));
    iv.throughput_bytes_per_s = interval_bytes[k] / (iv.end_s - iv.start_s);
    uint64_t acked = 0;
    uint64_t on_tape = 0;
    const auto t_us = static_cast<int64_t>(std::llround(iv.end_s * kUs));
    for (const auto& a : acks) {
      if (a.t_us <= t_us) acked += a.size;
    }
    for (const auto& t : transfers) {
      if (t.to_tape && t.end_us <= t_us) on_tape += t.bytes;
    }
    iv.backlog_bytes = acked > on_tape ? acked - on_tape : 0;
  }
  r.tape_bytes_in_window = static_cast<uint64_t>(std::llround(window_bytes));
  r.aggregate_throughput_bytes_per_s = window_bytes / dur;

  uint64_t migrated_at_end = 0;
  for (const auto& t : transfers) {
    if (t.to_tape && t.end_us <= end_us) migrated_at_end += t.bytes;
  }
  if (r.acknowledged_bytes > 0) {
    r.migrated_fraction_at_end =
        std::min(1.0, static_cast<double>(migrated_at_end) / static_cast<double>(r.acknowledged_bytes));
  }

  uint64_t migrated_after = 0;
  for (const auto& a : acks) {
    uint64_t on_tape = 0;
    for (const auto& s : ns.get_segments(a.file_id)) {
      if (s.copy_no == 1) on_tape += s.seg_size;
    }
    migrated_after += std::min(on_tape, a.size);
    if (is_lost(site, a)) ++r.lost_files;
  }
  if (r.acknowledged_bytes > 0) {
    r.migrated_fraction_after_drain = static_cast<double>(migrated_after) / static_cast<double>(r.acknowledged_bytes);
  }

  auto waits = stager.queue_waits_us();
  if (!waits.empty()) {
    std::sort(waits.begin(), waits.end());
    double sum = 0;
    for (auto w : waits) sum += static_cast<double>(w);
    r.queue_wait_mean_s = sum / static_cast<double>(waits.size()) / kUs;
    const size_t rank = static_cast<size_t>(std::ceil(0.95 * static_cast<double>(waits.size())));
    r.queue_wait_p95_s = static_cast<double>(waits[std::max<size_t>(rank, 1) - 1]) / kUs;
  }
  const auto stats = stager.stats();
  const uint64_t lookups = stats.cache_hits + stats.cache_misses;
  r.cache_hit_ratio = lookups == 0 ? 0 : static_cast<double>(stats.cache_hits) / static_cast<double>(lookups);
  r.recall_jobs = stats.recall_jobs;
  r.migration_jobs = stats.migration_jobs;
  r.failed_jobs = stats.failed_jobs;
  return r;
}

Json to_json(const ChallengeReport& r) {
  Json streams = Json::array();
  for (const auto& s : r.streams) {
    streams.push_back({{"name", s.name}, {"kind", s.kind}, {"files", s.files}, {"bytes", s.bytes}});
  }
  Json intervals = Json::array();
  for (const auto& iv : r.intervals) {
    intervals.push_back({{"start_s", iv.start_s},
                         {"end_s", iv.end_s},
                         {"tape_bytes", iv.tape_bytes},
                         {"throughput_bytes_per_s", iv.throughput_bytes_per_s},
                         {"backlog_bytes", iv.backlog_bytes}});
  }
  return Json{{"report_version", 1},
              {"workload", r.workload},
              {"seed", r.seed},
              {"duration_s", r.duration_s},
              {"drives", r.drives},
              {"streams", streams},
              {"acknowledged_files", r.acknowledged_files},
              {"acknowledged_bytes", r.acknowledged_bytes},
              {"rejected_writes", r.rejected_writes},
              {"read_requests", r.read_requests},
              {"tape_bytes_in_window", r.tape_bytes_in_window},
              {"aggregate_throughput_bytes_per_s", r.aggregate_throughput_bytes_per_s},
              {"intervals", intervals},
              {"migrated_fraction_at_end", r.migrated_fraction_at_end},
              {"migrated_fraction_after_drain", r.migrated_fraction_after_drain},
              {"drain_s", r.drain_s},
              {"queue_wait_mean_s", r.queue_wait_mean_s},
              {"queue_wait_p95_s", r.queue_wait_p95_s},
              {"lost_files", r.lost_files},
              {"cache_hit_ratio", r.cache_hit_ratio},
              {"recall_jobs", r.recall_jobs},
              {"migration_jobs", r.migration_jobs},
              {"failed_jobs", r.failed_jobs}};
}

std::string to_text(const ChallengeReport& r) {
  std::string out;
  out += fmt::format("workload {} seed {} duration {:.0f} s, {} drives\n", r.workload, r.seed, r.duration_s, r.drives);
  for (const auto& s : r.streams) {
    out += fmt::format("  stream {} {}: {} files, {} bytes\n", s.name, s.kind, s.files, s.bytes);
  }
  out += fmt::format("acknowledged {} files, {} bytes ({} writes rejected)\n", r.acknowledged_files,
                     r.acknowledged_bytes, r.rejected_writes);
  out += fmt::format("tape throughput {:.1f} MB/s over the window ({} bytes)\n",
                     r.aggregate_throughput_bytes_per_s / 1e6, r.tape_bytes_in_window);
  out += "interval        MB/s    backlog GB\n";
  for (const auto& iv : r.intervals) {
    out += fmt::format("{:>6.0f}-{:<6.0f} {:>8.1f} {:>12.2f}\n", iv.start_s, iv.end_s, iv.throughput_bytes_per_s / 1e6,
                       static_cast<double>(iv.backlog_bytes) / 1e9);
  }
  out += fmt::format("migrated {:.4f} at window end, {:.4f} after a {:.0f} s drain\n", r.migrated_fraction_at_end,
                     r.migrated_fraction_after_drain, r.drain_s);
  out += fmt::format("queue wait mean {:.1f} s, p95 {:.1f} s\n", r.queue_wait_mean_s, r.queue_wait_p95_s);
  out += fmt::format("lost files {}\n", r.lost_files);
  out += fmt::format("cache hit ratio {:.3f} ({} read requests)\n", r.cache_hit_ratio, r.read_requests);
  out += fmt::format("jobs: {} migration, {} recall, {} failed\n", r.migration_jobs, r.recall_jobs, r.failed_jobs);
  return out;
}

}  // namespace castor::challenge
