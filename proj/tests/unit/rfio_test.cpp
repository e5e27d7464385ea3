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

#include <gtest/gtest.h>
#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <fstream>
#include <random>

#include "castor/common/crc32.hpp"
#include "castor/rfio/protocol.hpp"
#include "support/site_rig.hpp"

namespace castor::rfio {
namespace {

using test::code_of;

constexpr uint64_t kMB = 1'000'000;
const std::string kDir = "/castor/cern.ch/user/";

struct Rig {
  test::TempDir dir;
  std::unique_ptr<site::Site> site;
  std::unique_ptr<RfioClient> client;

  Rig() {
    site::SiteOptions o;
    o.root = dir.path();
    o.plant = test::small_plant(2, {test::tape_pool("default", "B", 4, 20'000 * kMB)});
    o.pools = {test::disk_pool("p", {{"ds1", 16ull << 30}})};
    o.auto_migrate = false;
    o.block_timeout = std::chrono::milliseconds(20000);
    site = std::make_unique<site::Site>(o);
    client = std::make_unique<RfioClient>(site->client_options());
  }
};

std::vector<std::byte> random_bytes(std::mt19937_64& rng, size_t n) {
  std::vector<std::byte> v(n);
  for (auto& b : v) b = static_cast<std::byte>(rng());
  return v;
}

fileio::Digest local_digest(const std::filesystem::path& p) { return fileio::digest(p); }

TEST(RemoteHandle, ScriptsMatchLocalFileOracle) {
  Rig rig;
  for (int trial = 0; trial < 10; ++trial) {
    std::mt19937_64 rng(trial);
    const std::string path = kDir + "oracle" + std::to_string(trial);
    const auto local = rig.dir.path() / ("oracle" + std::to_string(trial));
    const int fd = ::open(local.c_str(), O_CREAT | O_TRUNC | O_RDWR, 0644);
    ASSERT_GE(fd, 0);
    auto w = rig.client->rf_open(path, Mode::kWrite);
    for (int op = 0; op < 60; ++op) {
      const int kind = static_cast<int>(rng() % 4);
      if (kind < 2) {
        const auto data = random_bytes(rng, rng() % 70000);
        EXPECT_EQ(w->write(data), data.size());
        ASSERT_EQ(::write(fd, data.data(), data.size()), static_cast<ssize_t>(data.size()));
      } else {
        const int whence = static_cast<int>(rng() % 3);
        const int64_t off = static_cast<int64_t>(rng() % 200000) - (whence == 0 ? 0 : 50000);
        const off_t want = ::lseek(fd, off, whence == 0 ? SEEK_SET : whence == 1 ? SEEK_CUR : SEEK_END);
        if (want < 0) {
          EXPECT_EQ(code_of([&] { w->lseek(off, static_cast<Whence>(whence)); }), Errc::kNegativePosition);
        } else {
          EXPECT_EQ(w->lseek(off, static_cast<Whence>(whence)), static_cast<uint64_t>(want));
        }
      }
      ASSERT_EQ(w->position(), static_cast<uint64_t>(::lseek(fd, 0, SEEK_CUR)));
    }
    const auto d = w->close();
    const auto want = local_digest(local);
    EXPECT_EQ(d.size, want.size);
    EXPECT_EQ(d.crc32, want.crc32);
    EXPECT_EQ(rig.client->rf_stat(path).size_bytes, want.size);

    auto r = rig.client->rf_open(path, Mode::kRead);
    ::lseek(fd, 0, SEEK_SET);
    for (int op = 0; op < 60; ++op) {
      if (rng() % 3 == 0) {
        const int whence = static_cast<int>(rng() % 3);
        const int64_t off = static_cast<int64_t>(rng() % (want.size + 1)) - (whence == 2 ? static_cast<int64_t>(want.size) : 0);
        const off_t pos = ::lseek(fd, off, whence == 0 ? SEEK_SET : whence == 1 ? SEEK_CUR : SEEK_END);
        if (pos < 0) {
          EXPECT_EQ(code_of([&] { r->lseek(off, static_cast<Whence>(whence)); }), Errc::kNegativePosition);
        } else if (static_cast<uint64_t>(pos) > want.size) {
          EXPECT_EQ(code_of([&] { r->lseek(off, static_cast<Whence>(whence)); }), Errc::kInvalidArgument);
          ::lseek(fd, static_cast<off_t>(r->position()), SEEK_SET);
        } else {
          EXPECT_EQ(r->lseek(off, static_cast<Whence>(whence)), static_cast<uint64_t>(pos));
        }
      } else {
        std::vector<std::byte> a(rng() % 90000);
        std::vector<std::byte> b(a.size());
        const size_t got = r->read(a);
        const ssize_t expect = ::read(fd, b.data(), b.size());
        ASSERT_EQ(got, static_cast<size_t>(expect));
        ASSERT_TRUE(std::equal(a.begin(), a.begin() + static_cast<long>(got), b.begin()));
      }
    }
    r->close();
    ::close(fd);
  }
}

TEST(RemoteHandle, SeekReadAndHandleRules) {
  Rig rig;
  auto w = rig.client->rf_open(kDir + "h", Mode::kWrite);
  const std::vector<std::byte> hundred(100, std::byte{7});
  w->write(hundred);
  // A reader before put_done sees the bytes written so far.
  auto early = rig.client->rf_open(kDir + "h", Mode::kRead);
  EXPECT_EQ(early->size(), 100u);
  EXPECT_EQ(rig.client->rf_stat(kDir + "h").size_bytes, 0u);
  EXPECT_EQ(code_of([&] { rig.client->rf_open(kDir + "h", Mode::kWrite); }), Errc::kBusy);
  std::vector<std::byte> buf(10);
  EXPECT_EQ(code_of([&] { w->read(buf); }), Errc::kBadHandle);
  w->close();
  EXPECT_EQ(code_of([&] { w->write(hundred); }), Errc::kBadHandle);
  EXPECT_EQ(rig.client->rf_stat(kDir + "h").size_bytes, 100u);

  auto r = rig.client->rf_open(kDir + "h", Mode::kRead);
  EXPECT_EQ(r->lseek(0, Whence::kSet), 0u);
  EXPECT_EQ(r->lseek(0, Whence::kEnd), 100u);
  EXPECT_EQ(r->read(buf), 0u);
  EXPECT_EQ(code_of([&] { r->lseek(-101, Whence::kEnd); }), Errc::kNegativePosition);
  EXPECT_EQ(code_of([&] { r->lseek(1, Whence::kEnd); }), Errc::kInvalidArgument);
  EXPECT_EQ(r->lseek(95, Whence::kSet), 95u);
  EXPECT_EQ(r->read(buf), 5u);
  EXPECT_EQ(code_of([&] { r->write(hundred); }), Errc::kBadHandle);
  EXPECT_EQ(code_of([&] { rig.client->rf_open(kDir + "absent", Mode::kRead); }), Errc::kNotFound);
  EXPECT_TRUE(rig.client->rf_stat("/castor").is_dir());
}

TEST(RemoteHandle, TwoGigabytesPlusEight) {
  Rig rig;
  const uint64_t total = (1ull << 31) + 8;
  auto w = rig.client->rf_open(kDir + "2g", Mode::kWrite, total);
  std::vector<std::byte> chunk(1 << 20);
  chunk[0] = std::byte{1};
  crc32::Crc32 crc;
  uint64_t done = 0;
  while (done < total) {
    const size_t n = std::min<uint64_t>(chunk.size(), total - done);
    done += w->write(std::span(chunk).first(n));
    crc.update(std::span(chunk).first(n));
  }
  EXPECT_EQ(w->position(), total);
  const auto d = w->close();
  EXPECT_EQ(d.size, total);
  EXPECT_EQ(d.crc32, crc.value());
  EXPECT_EQ(rig.client->rf_stat(kDir + "2g").size_bytes, 2147483656ull);
}

TEST(RemoteHandle, SparseThreeGigabytesMatchesLocalOracle) {
  Rig rig;
  const uint64_t size = 3ull << 30;
  const auto local = rig.dir.path() / "sparse";
  const int fd = ::open(local.c_str(), O_CREAT | O_TRUNC | O_RDWR, 0644);
  auto w = rig.client->rf_open(kDir + "sparse", Mode::kWrite);
  const std::vector<std::pair<uint64_t, std::string>> writes = {
      {0, "head"}, {1ull << 30, "middle"}, {(1ull << 32) - 10, "past4g?"}, {size - 4, "tail"}};
  for (const auto& [off, text] : writes) {
    if (off + text.size() > size) continue;
    w->lseek(static_cast<int64_t>(off), Whence::kSet);
    w->write(std::as_bytes(std::span(text.data(), text.size())));
    ASSERT_EQ(::pwrite(fd, text.data(), text.size(), static_cast<off_t>(off)), static_cast<ssize_t>(text.size()));
  }
  const auto d = w->close();
  const auto want = local_digest(local);
  EXPECT_EQ(d.size, size);
  EXPECT_EQ(d.crc32, want.crc32);
  auto r = rig.client->rf_open(kDir + "sparse", Mode::kRead);
  for (uint64_t off : {uint64_t{4}, uint64_t{(1ull << 30) - 3}, uint64_t{(2ull << 30) + 12345}, uint64_t{size - 8}}) {
    std::vector<std::byte> a(8);
    std::vector<std::byte> b(8);
    r->lseek(static_cast<int64_t>(off), Whence::kSet);
    ASSERT_EQ(r->read(a), 8u);
    ASSERT_EQ(::pread(fd, b.data(), 8, static_cast<off_t>(off)), 8);
    EXPECT_EQ(a, b) << off;
  }
  ::close(fd);
}

TEST(RemoteHandle, StatDelegatesToNameServer) {
  Rig rig;
  std::mt19937 rng(3);
  for (int i = 0; i < 100; ++i) {
    const std::string path = kDir + "s" + std::to_string(i);
    if (i % 2 == 0) {
      test::write_file(*rig.client, path, rng() % 100000, i);
    } else {
      rig.site->catalog().create_file(path, 0640, 1, 2);
    }
    EXPECT_EQ(rig.client->rf_stat(path), rig.site->catalog().stat(path)) << path;
  }
}

TEST(Rfcp, RoundTripsKeepCrc) {
  Rig rig;
  const auto src = rig.dir.path() / "in.bin";
  {
    std::mt19937_64 rng(1);
    const auto data = random_bytes(rng, 3'000'001);
    std::ofstream(src, std::ios::binary).write(reinterpret_cast<const char*>(data.data()), data.size());
  }
  const auto up = rfcp(*rig.client, src, kDir + "copy");
  const auto down = rfcp(*rig.client, kDir + "copy", rig.dir.path() / "out.bin");
  const auto c2c = rfcp(*rig.client, kDir + "copy", kDir + "copy2");
  EXPECT_EQ(up.bytes, 3'000'001u);
  EXPECT_EQ(up.crc32, local_digest(src).crc32);
  EXPECT_EQ(down.crc32, up.crc32);
  EXPECT_EQ(c2c.crc32, up.crc32);
  EXPECT_EQ(local_digest(rig.dir.path() / "out.bin").crc32, up.crc32);
  EXPECT_EQ(rig.client->rf_stat(kDir + "copy2").checksum, up.crc32);

  std::ofstream(rig.dir.path() / "empty").close();
  const auto zero = rfcp(*rig.client, rig.dir.path() / "empty", kDir + "empty");
  EXPECT_EQ(zero.bytes, 0u);
  EXPECT_EQ(rig.client->rf_stat(kDir + "empty").size_bytes, 0u);
  EXPECT_EQ(code_of([&] { rfcp(*rig.client, kDir + "nothing", rig.dir.path() / "x"); }), Errc::kNotFound);
}

TEST(Rfcp, SparseThreeGigabytesThroughTape) {
  Rig rig;
  const auto src = rig.dir.path() / "big.bin";
  {
    const int fd = ::open(src.c_str(), O_CREAT | O_TRUNC | O_WRONLY, 0644);
    ASSERT_EQ(::pwrite(fd, "start", 5, 0), 5);
    ASSERT_EQ(::pwrite(fd, "end", 3, static_cast<off_t>((3ull << 30) - 3)), 3);
    ::close(fd);
  }
  const auto want = local_digest(src);
  const auto up = rfcp(*rig.client, src, kDir + "big");
  EXPECT_EQ(up.crc32, want.crc32);
  EXPECT_TRUE(rig.site->stager().run_migrator("p").error.empty());
  rig.site->stager().purge(kDir + "big");
  const auto down = rfcp(*rig.client, kDir + "big", rig.dir.path() / "back.bin");
  EXPECT_EQ(down.bytes, 3ull << 30);
  EXPECT_EQ(down.crc32, want.crc32);
  EXPECT_EQ(local_digest(rig.dir.path() / "back.bin").crc32, want.crc32);
  // Holes stay holes on the disk copy and on the way back.
  struct stat st {};
  const auto loc = rig.site->stager().stage_in(kDir + "big");
  ASSERT_EQ(::stat(loc.path.c_str(), &st), 0);
  EXPECT_LT(static_cast<uint64_t>(st.st_blocks) * 512, 1u << 20);
  ASSERT_EQ(::stat((rig.dir.path() / "back.bin").c_str(), &st), 0);
  EXPECT_LT(static_cast<uint64_t>(st.st_blocks) * 512, 1u << 20);
}

TEST(DiskServer, FramingAndSessionRules) {
  test::TempDir dir;
  DiskServer server(DiskServerOptions{{dir.path()}});
  auto connector = std::make_shared<Connector>();
  connector->register_loopback("d", &server);
  const std::string path = (dir.path() / "f").string();
  auto t = connector->connect("loop://d");
  // Unknown marker and an empty frame are protocol errors.
  EXPECT_NE(t->roundtrip(std::string("\x07{}", 3)).find("ProtocolError"), std::string::npos);
  EXPECT_NE(t->roundtrip("").find("ProtocolError"), std::string::npos);
  DataFrame bogus;
  bogus.opcode = Opcode::kStat;
  bogus.handle_id = 99;
  EXPECT_NE(t->roundtrip(encode_data(bogus)).find("BadHandle"), std::string::npos);

  DiskSession writer(connector->connect("loop://d"), path, OpenMode::kWriteTruncate);
  EXPECT_EQ(code_of([&] { DiskSession(connector->connect("loop://d"), path, OpenMode::kWrite); }), Errc::kBusy);
  DiskSession reader(connector->connect("loop://d"), path, OpenMode::kRead);
  const std::string text = "hello";
  writer.write(0, std::as_bytes(std::span(text.data(), text.size())));
  std::vector<std::byte> buf(16);
  EXPECT_EQ(reader.read(0, buf), 5u);
  EXPECT_EQ(code_of([&] { DiskSession(connector->connect("loop://d"), "/etc/passwd", OpenMode::kRead); }),
            Errc::kInvalidArgument);
  writer.close();
  DiskSession again(connector->connect("loop://d"), path, OpenMode::kWrite);
  EXPECT_EQ(again.size(), 5u);
}

}  // namespace
}  // namespace castor::rfio
