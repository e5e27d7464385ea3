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
#include <sys/stat.h>
#include <unistd.h>

#include <cstring>

#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "castor/common/config.hpp"
#include "castor/common/crc32.hpp"
#include "castor/common/file_io.hpp"
#include "castor/common/frame.hpp"
#include "castor/common/journal.hpp"
#include "castor/common/rpc.hpp"
#include "support/temp_dir.hpp"

namespace castor {
namespace {

TEST(FrameTest, LengthIsBigEndian) {
  const std::string f = wire::encode_frame("abc");
  ASSERT_EQ(f.size(), 7u);
  EXPECT_EQ(f.substr(0, 4), std::string("\x00\x00\x00\x03", 4));
  EXPECT_EQ(f.substr(4), "abc");
}

TEST(FrameTest, DecoderReassemblesArbitrarySplits) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> bodies;
    std::string stream;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      std::string body(rng() % 300, '\0');
      for (char& c : body) c = static_cast<char>(rng());
      stream += wire::encode_frame(body);
      bodies.push_back(std::move(body));
    }
    wire::FrameDecoder dec;
    std::vector<std::string> got;
    size_t pos = 0;
    while (pos < stream.size()) {
      const size_t chunk = 1 + rng() % 17;
      dec.feed(std::string_view(stream).substr(pos, chunk));
      pos += chunk;
      while (auto f = dec.next()) got.push_back(*f);
    }
    EXPECT_EQ(got, bodies);
    EXPECT_EQ(dec.buffered(), 0u);
  }
}

TEST(FrameTest, OversizedLengthIsRejected) {
  wire::FrameDecoder dec;
  dec.feed(std::string("\xff\xff\xff\xff", 4));
  EXPECT_THROW(dec.next(), CastorError);
}

TEST(ConfigTest, ParsesSectionsAndTypes) {
  const Config cfg = Config::parse(R"(
listen = "127.0.0.1:5010"   # trailing comment
[journal]
path = "/tmp/x # not a comment"
sync = false
[model.9940B]
drives = 21
rate = 30_000_000
mount_seconds = 60.5
aliases = ["a", "b"]
)");
  EXPECT_EQ(cfg.get_string("", "listen"), "127.0.0.1:5010");
  EXPECT_EQ(cfg.get_string("journal", "path"), "/tmp/x # not a comment");
  EXPECT_FALSE(cfg.get_bool("journal", "sync", true));
  EXPECT_EQ(cfg.get_int("model.9940B", "drives"), 21);
  EXPECT_EQ(cfg.get_int("model.9940B", "rate"), 30000000);
  EXPECT_DOUBLE_EQ(cfg.get_double("model.9940B", "mount_seconds"), 60.5);
  EXPECT_DOUBLE_EQ(cfg.get_double("model.9940B", "drives"), 21.0);
  EXPECT_EQ(cfg.get_strings("model.9940B", "aliases"), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(cfg.sections_with_prefix("model."), std::vector<std::string>{"model.9940B"});
  EXPECT_EQ(cfg.get_int("nope", "x", 4), 4);
  EXPECT_THROW(cfg.get_int("journal", "path"), CastorError);
}

TEST(ConfigTest, RejectsGarbage) {
  EXPECT_THROW(Config::parse("key"), CastorError);
  EXPECT_THROW(Config::parse("[open"), CastorError);
  EXPECT_THROW(Config::parse("k = \"unterminated"), CastorError);
  EXPECT_THROW(Config::parse("k = 12abc"), CastorError);
}

TEST(JournalTest, ReplaysAppendedRecords) {
  test::TempDir dir;
  {
    Journal j(dir.path(), {.sync = false});
    j.recover([](const Json&) {}, [](const Json&) {});
    for (int i = 0; i < 5; ++i) j.append(Json{{"i", i}});
  }
  Journal j(dir.path(), {.sync = false});
  std::vector<int> seen;
  j.recover([](const Json&) { FAIL(); }, [&](const Json& r) { seen.push_back(r["i"].get<int>()); });
  EXPECT_EQ(seen, (std::vector<int>{0, 1, 2, 3, 4}));
  EXPECT_EQ(j.last_seq(), 5u);
}

TEST(JournalTest, TornTailIsDiscarded) {
  test::TempDir dir;
  {
    Journal j(dir.path(), {.sync = false});
    j.recover([](const Json&) {}, [](const Json&) {});
    j.append(Json{{"i", 1}});
    j.append(Json{{"i", 2}});
  }
  const auto log = dir.path() / "journal.log";
  const auto full = std::filesystem::file_size(log);
  std::filesystem::resize_file(log, full - 3);
  {
    Journal j(dir.path(), {.sync = false});
    std::vector<int> seen;
    j.recover([](const Json&) {}, [&](const Json& r) { seen.push_back(r["i"].get<int>()); });
    EXPECT_EQ(seen, std::vector<int>{1});
    j.append(Json{{"i", 3}});
  }
  Journal j(dir.path(), {.sync = false});
  std::vector<int> seen;
  j.recover([](const Json&) {}, [&](const Json& r) { seen.push_back(r["i"].get<int>()); });
  EXPECT_EQ(seen, (std::vector<int>{1, 3}));
}

TEST(JournalTest, SnapshotThenRecords) {
  test::TempDir dir;
  {
    Journal j(dir.path(), {.sync = false, .snapshot_every = 3});
    j.recover([](const Json&) {}, [](const Json&) {});
    j.append(Json{{"i", 1}});
    j.append(Json{{"i", 2}});
    j.append(Json{{"i", 3}});
    ASSERT_TRUE(j.snapshot_due());
    j.write_snapshot(Json{{"sum", 6}});
    j.append(Json{{"i", 4}});
  }
  Journal j(dir.path(), {.sync = false});
  int sum = 0;
  j.recover([&](const Json& s) { sum = s["sum"].get<int>(); }, [&](const Json& r) { sum += r["i"].get<int>(); });
  EXPECT_EQ(sum, 10);
  EXPECT_EQ(j.last_seq(), 4u);
}

Dispatcher make_echo() {
  Dispatcher d;
  d.add("echo", [](const Json& args) { return args; });
  d.add("fail", [](const Json&) -> Json { raise(Errc::kNotFound, "nothing here"); });
  d.add("need", [](const Json& args) { return Json(arg<int>(args, "x") + 1); });
  return d;
}

TEST(RpcTest, LoopbackRoundTripAndErrors) {
  Dispatcher d = make_echo();
  RpcClient client(std::make_shared<LoopbackTransport>("loop://echo", d));
  EXPECT_EQ(client.call("echo", Json{{"a", 1}}), (Json{{"a", 1}}));
  try {
    client.call("fail");
    FAIL();
  } catch (const CastorError& e) {
    EXPECT_EQ(e.code(), Errc::kNotFound);
    EXPECT_EQ(e.detail(), "nothing here");
  }
  try {
    client.call("need", Json{{"x", "str"}});
    FAIL();
  } catch (const CastorError& e) {
    EXPECT_EQ(e.code(), Errc::kInvalidArgument);
  }
  EXPECT_THROW(client.call("nope"), CastorError);
}

TEST(RpcTest, ResponseShapeOnTheWire) {
  Dispatcher d = make_echo();
  const std::string reply =
      d.handle_frame(R"({"op":"fail","args":{},"req_id":"r1"})", 0);
  const Json j = Json::parse(reply);
  EXPECT_EQ(j["req_id"], "r1");
  EXPECT_EQ(j["ok"], false);
  EXPECT_EQ(j["error"]["code"], "NotFound");
  EXPECT_EQ(j["error"]["message"], "nothing here");
}

TEST(RpcTest, TcpRoundTripWithConcurrentCallers) {
  Dispatcher d = make_echo();
  FrameServer server(d, {"127.0.0.1", 0});
  server.start();
  auto transport = std::make_shared<TcpTransport>("127.0.0.1:" + std::to_string(server.port()));
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      RpcClient client(transport);
      for (int i = 0; i < 50; ++i) {
        if (client.call("need", Json{{"x", t * 100 + i}}) == Json(t * 100 + i + 1)) ++ok;
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(ok.load(), 200);
  server.stop();
  RpcClient client(transport);
  EXPECT_THROW(client.call("echo"), CastorError);
}

TEST(FileIoTest, SparseDigestMatchesDenseCrc) {
  test::TempDir dir;
  const auto path = dir.path() / "sparse";
  {
    auto fd = fileio::open_write(path, true);
    const std::string head = "head-bytes";
    const std::string tail = "tail";
    fileio::pwrite_all(fd.get(), std::as_bytes(std::span(head.data(), head.size())), 0);
    fileio::pwrite_all(fd.get(), std::as_bytes(std::span(tail.data(), tail.size())), (64u << 20) + 5);
  }
  std::string dense(static_cast<size_t>((64u << 20) + 9), '\0');
  std::memcpy(dense.data(), "head-bytes", 10);
  std::memcpy(dense.data() + (64u << 20) + 5, "tail", 4);
  const auto d = fileio::digest(path);
  EXPECT_EQ(d.size, dense.size());
  EXPECT_EQ(d.crc32, crc32::of(dense));
  auto fd = fileio::open_read(path);
  const auto extents = fileio::data_extents(fd.get(), 0, d.size);
  ASSERT_FALSE(extents.empty());
  EXPECT_EQ(extents.front().offset, 0u);
}

TEST(FileIoTest, MixedBufferKeepsZeroBlocksAsHoles) {
  test::TempDir dir;
  const auto path = dir.path() / "mixed";
  auto fd = fileio::open_write(path, true);
  std::vector<std::byte> buf(4 << 20);
  buf[10] = std::byte{1};
  buf[buf.size() - 1] = std::byte{2};
  fileio::write_sparse(fd.get(), buf, 0);
  EXPECT_EQ(fileio::size_of(fd.get()), buf.size());
  const auto extents = fileio::data_extents(fd.get(), 0, buf.size());
  uint64_t data = 0;
  for (const auto& e : extents) data += e.length;
  EXPECT_LE(data, 64u * 1024);
  const auto d = fileio::digest(path);
  EXPECT_EQ(d.crc32, crc32::update(0, buf));
  // Rewriting zeros over existing data must really write them.
  std::vector<std::byte> zeros(4096);
  fileio::write_sparse(fd.get(), zeros, 0);
  std::byte b{};
  fileio::pread_upto(fd.get(), std::span(&b, 1), 10);
  EXPECT_EQ(b, std::byte{0});
}

TEST(FileIoTest, ZeroWritesPastEofStayHoles) {
  test::TempDir dir;
  const auto path = dir.path() / "f";
  auto fd = fileio::open_write(path, true);
  std::vector<std::byte> zeros(1 << 20, std::byte{0});
  for (int i = 0; i < 64; ++i) fileio::write_sparse(fd.get(), zeros, static_cast<uint64_t>(i) << 20);
  EXPECT_EQ(fileio::size_of(fd.get()), 64u << 20);
  struct stat st {};
  ::fstat(fd.get(), &st);
  EXPECT_LT(st.st_blocks * 512, 1 << 20);
}

}  // namespace
}  // namespace castor
