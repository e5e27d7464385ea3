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

#include <random>
#include <thread>

#include "castor/ns/catalog.hpp"
#include "castor/ns/service.hpp"
#include "support/ns_script.hpp"
#include "support/temp_dir.hpp"
#include "support/tree_oracle.hpp"

namespace castor::ns {
namespace {

constexpr uint64_t kGiB = 1ull << 30;

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const CastorError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return Errc::kInternal;
}

RouteTable two_instance_routes() {
  RouteTable t;
  t.add({"cern.ch", "user", "loop://ns-user", 0});
  t.add({"cnaf.infn.it", "data", "loop://ns-data", 1});
  return t;
}

TEST(RouteTest, ResolvesByDomainAndTopDir) {
  const RouteTable t = two_instance_routes();
  const ServerRoute r = t.resolve("/castor/cern.ch/user/a/b");
  EXPECT_EQ(r.alias(), "cnsuser");
  EXPECT_EQ(r.domain, "cern.ch");
  const ServerRoute d = t.resolve("/castor/cnaf.infn.it/data/x");
  EXPECT_EQ(d.alias(), "cnsdata");
  EXPECT_EQ(d.domain, "cnaf.infn.it");
  EXPECT_EQ(code_of([&] { t.resolve("/castor"); }), Errc::kMalformedPath);
  EXPECT_EQ(code_of([&] { t.resolve("/castor/cern.ch"); }), Errc::kMalformedPath);
  EXPECT_EQ(code_of([&] { t.resolve("/data/x"); }), Errc::kMalformedPath);
  EXPECT_EQ(code_of([&] { t.resolve("/castor/cern.ch/other/x"); }), Errc::kUnknownRoute);
  // Pure function of path and table.
  EXPECT_EQ(t.resolve("/castor/cern.ch/user/a"), t.resolve("/castor/cern.ch/user/a"));
}

TEST(PathTest, Limits) {
  EXPECT_EQ(split_path("/castor"), std::vector<std::string>{});
  EXPECT_EQ(split_path("/castor/a/b/"), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(code_of([] { split_path("/castor//a"); }), Errc::kMalformedPath);
  EXPECT_EQ(code_of([] { split_path("/castorx"); }), Errc::kMalformedPath);
  EXPECT_EQ(code_of([] { split_path("/castor/" + std::string(256, 'x')); }), Errc::kMalformedPath);
  EXPECT_NO_THROW(split_path("/castor/" + std::string(255, 'x')));
  std::string deep = "/castor";
  for (int i = 0; i < 64; ++i) deep += "/d";
  EXPECT_NO_THROW(split_path(deep));
  EXPECT_EQ(code_of([&] { split_path(deep + "/d"); }), Errc::kMalformedPath);
}

class CatalogTest : public ::testing::Test {
 protected:
  CatalogTest() : catalog_(CatalogOptions{.implicit_dirs = {"/castor/cern.ch"}}) {}
  Catalog catalog_;
};

TEST_F(CatalogTest, RootAndImplicitDirs) {
  EXPECT_TRUE(catalog_.stat("/castor").is_dir());
  EXPECT_TRUE(catalog_.stat("/castor/cern.ch").is_dir());
  const uint64_t id = catalog_.mkdir("/castor/cern.ch/user", 0755, 0, 0);
  const auto listing = catalog_.list_dir("/castor/cern.ch");
  ASSERT_EQ(listing.size(), 1u);
  EXPECT_EQ(listing[0].file_id, id);
  EXPECT_EQ(code_of([&] { catalog_.mkdir("/castor/cern.ch/user", 0755, 0, 0); }), Errc::kExists);
  EXPECT_EQ(code_of([&] { catalog_.mkdir("/castor/nope/x", 0755, 0, 0); }), Errc::kNotFound);
}

TEST_F(CatalogTest, CreateStatUnlink) {
  const uint64_t id = catalog_.create_file("/castor/cern.ch/f", 0644, 10, 20);
  const NsEntry e = catalog_.stat("/castor/cern.ch/f");
  EXPECT_EQ(e.file_id, id);
  EXPECT_EQ(e.size_bytes, 0u);
  EXPECT_EQ(e.kind, EntryKind::kFile);
  EXPECT_EQ(e.uid, 10u);
  EXPECT_EQ(code_of([&] { catalog_.create_file("/castor/cern.ch/f/g", 0644, 0, 0); }), Errc::kNotADirectory);
  EXPECT_EQ(code_of([&] { catalog_.create_file("/castor/cern.ch/f", 0644, 0, 0); }), Errc::kExists);
  EXPECT_EQ(code_of([&] { catalog_.unlink("/castor/cern.ch"); }), Errc::kIsADirectory);
  catalog_.unlink("/castor/cern.ch/f");
  EXPECT_EQ(code_of([&] { catalog_.stat("/castor/cern.ch/f"); }), Errc::kNotFound);
}

TEST_F(CatalogTest, RmdirRules) {
  catalog_.mkdir("/castor/cern.ch/d", 0755, 0, 0);
  catalog_.create_file("/castor/cern.ch/d/x", 0644, 0, 0);
  EXPECT_EQ(code_of([&] { catalog_.rmdir("/castor/cern.ch/d"); }), Errc::kNotEmpty);
  EXPECT_EQ(code_of([&] { catalog_.rmdir("/castor/cern.ch/d/x"); }), Errc::kNotADirectory);
  catalog_.unlink("/castor/cern.ch/d/x");
  catalog_.rmdir("/castor/cern.ch/d");
  EXPECT_EQ(code_of([&] { catalog_.rmdir("/castor"); }), Errc::kInvalidArgument);
}

TEST_F(CatalogTest, RenameKeepsIdsAndRejectsCycles) {
  catalog_.mkdir("/castor/cern.ch/d", 0755, 0, 0);
  const uint64_t a = catalog_.mkdir("/castor/cern.ch/d/a", 0755, 0, 0);
  catalog_.mkdir("/castor/cern.ch/d/a/sub", 0755, 0, 0);
  catalog_.rename("/castor/cern.ch/d/a", "/castor/cern.ch/d/b");
  EXPECT_EQ(code_of([&] { catalog_.stat("/castor/cern.ch/d/a"); }), Errc::kNotFound);
  EXPECT_EQ(catalog_.stat("/castor/cern.ch/d/b").file_id, a);
  EXPECT_TRUE(catalog_.stat("/castor/cern.ch/d/b/sub").is_dir());
  EXPECT_EQ(catalog_.path_of(a), "/castor/cern.ch/d/b");
  EXPECT_EQ(code_of([&] { catalog_.rename("/castor/cern.ch/d/b", "/castor/cern.ch/d/b/sub/x"); }), Errc::kCycleError);
  EXPECT_EQ(code_of([&] { catalog_.rename("/castor/cern.ch/d", "/castor/cern.ch/d/q"); }), Errc::kCycleError);
  catalog_.create_file("/castor/cern.ch/d/c", 0644, 0, 0);
  EXPECT_EQ(code_of([&] { catalog_.rename("/castor/cern.ch/d/c", "/castor/cern.ch/d/b"); }), Errc::kExists);
  EXPECT_EQ(code_of([&] { catalog_.rename("/castor/cern.ch/zz", "/castor/cern.ch/d/q"); }), Errc::kNotFound);
}

TEST_F(CatalogTest, ListingIsBytewiseSorted) {
  catalog_.mkdir("/castor/cern.ch/l", 0755, 0, 0);
  EXPECT_TRUE(catalog_.list_dir("/castor/cern.ch/l").empty());
  for (const char* n : {"b", "a", "B", "\xc3\xa9", "a0"}) catalog_.create_file(std::string("/castor/cern.ch/l/") + n, 0644, 0, 0);
  std::vector<std::string> names;
  for (const auto& e : catalog_.list_dir("/castor/cern.ch/l")) names.push_back(e.name);
  EXPECT_EQ(names, (std::vector<std::string>{"B", "a", "a0", "b", "\xc3\xa9"}));
}

TEST_F(CatalogTest, LargeSizesAreExact) {
  const uint64_t id = catalog_.create_file("/castor/cern.ch/big", 0644, 0, 0);
  catalog_.set_file_size(id, 0, std::nullopt);
  EXPECT_EQ(catalog_.stat("/castor/cern.ch/big").size_bytes, 0u);
  catalog_.set_file_size(id, (1ull << 31) + 1, 7u);
  EXPECT_EQ(catalog_.stat("/castor/cern.ch/big").size_bytes, 2147483649u);
  catalog_.set_file_size(id, 3 * kGiB, 9u);
  const NsEntry e = catalog_.stat("/castor/cern.ch/big");
  EXPECT_EQ(e.size_bytes, 3221225472u);
  EXPECT_EQ(e.checksum, 9u);
}

TEST_F(CatalogTest, SegmentsRules) {
  const uint64_t id = catalog_.create_file("/castor/cern.ch/s", 0644, 0, 0);
  catalog_.set_file_size(id, 100, 1u);
  catalog_.add_segment(id, Segment{.copy_no = 1, .vid = "A00001", .fseq = 1, .seg_size = 100, .seg_checksum = 1});
  auto segs = catalog_.get_segments(id);
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(segs[0].seg_seq, 1u);
  EXPECT_EQ(segs[0].file_id, id);
  EXPECT_EQ(code_of([&] {
              catalog_.add_segment(id, Segment{.copy_no = 2, .vid = "A00001", .fseq = 1, .seg_size = 100});
            }),
            Errc::kDuplicateTapeLocation);
  EXPECT_EQ(code_of([&] {
              catalog_.add_segment(id, Segment{.copy_no = 2, .vid = "A00002", .fseq = 1, .seg_size = 101});
            }),
            Errc::kSizeMismatch);
  EXPECT_EQ(code_of([&] {
              catalog_.replace_segments(id, 1, {Segment{.vid = "B00001", .fseq = 1, .seg_size = 60}});
            }),
            Errc::kSizeMismatch);
  EXPECT_EQ(code_of([&] { catalog_.add_segment(id + 1000, Segment{.vid = "C", .fseq = 1, .seg_size = 1}); }),
            Errc::kNotFound);
  // Changing the size under a complete copy breaks segment conservation.
  EXPECT_EQ(code_of([&] { catalog_.set_file_size(id, 50, std::nullopt); }), Errc::kSizeMismatch);

  const uint64_t two = catalog_.create_file("/castor/cern.ch/two", 0644, 0, 0);
  catalog_.set_file_size(two, 10, 2u);
  catalog_.add_segment(two, Segment{.vid = "A00001", .fseq = 2, .seg_size = 4});
  catalog_.add_segment(two, Segment{.vid = "A00002", .fseq = 1, .seg_size = 6});
  EXPECT_EQ(catalog_.get_segments(two).back().seg_seq, 2u);
  catalog_.unlink("/castor/cern.ch/two");
  EXPECT_TRUE(catalog_.segments_on_vid("A00002").empty());
  // Freed locations are reusable.
  catalog_.add_segment(id, Segment{.copy_no = 2, .vid = "A00002", .fseq = 1, .seg_size = 100});
}

TEST_F(CatalogTest, ReplaceSegmentsMovesCopyBetweenVolumes) {
  // 20-file fixture on A00001; a catalog scan before and after is the oracle.
  std::vector<uint64_t> ids;
  for (int i = 0; i < 20; ++i) {
    const uint64_t id = catalog_.create_file("/castor/cern.ch/r" + std::to_string(i), 0644, 0, 0);
    catalog_.set_file_size(id, 1000 + i, 0xC0 + i);
    catalog_.add_segment(id, Segment{.vid = "A00001", .fseq = static_cast<uint32_t>(i + 1),
                                     .seg_size = 1000u + i, .seg_checksum = 0xC0u + i});
    ids.push_back(id);
  }
  auto scan = [&] {
    std::multiset<std::tuple<uint64_t, uint32_t, uint32_t>> out;
    for (uint64_t id : ids) out.emplace(id, 1, *catalog_.stat_id(id).checksum);
    return out;
  };
  const auto before = scan();
  EXPECT_EQ(catalog_.segments_on_vid("A00001").size(), 20u);
  for (int i = 0; i < 20; ++i) {
    catalog_.replace_segments(ids[i], 1, {Segment{.vid = "B00001", .fseq = static_cast<uint32_t>(i + 1),
                                                  .seg_size = 1000u + i, .seg_checksum = 0xC0u + i}});
  }
  EXPECT_TRUE(catalog_.segments_on_vid("A00001").empty());
  EXPECT_EQ(catalog_.segments_on_vid("B00001").size(), 20u);
  EXPECT_EQ(scan(), before);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(catalog_.get_segments(ids[i]).at(0).seg_checksum, 0xC0u + i);
}

TEST_F(CatalogTest, ReadersNeverSeeTornReplacement) {
  const uint64_t id = catalog_.create_file("/castor/cern.ch/t", 0644, 0, 0);
  catalog_.set_file_size(id, 10, 1u);
  catalog_.add_segment(id, Segment{.vid = "V00000", .fseq = 1, .seg_size = 10});
  std::atomic<bool> stop{false};
  std::atomic<int> bad{0};
  std::thread reader([&] {
    while (!stop) {
      const auto segs = catalog_.get_segments(id);
      uint64_t sum = 0;
      for (const auto& s : segs) sum += s.seg_size;
      if (sum != 10) ++bad;
    }
  });
  for (uint32_t i = 1; i <= 300; ++i) {
    catalog_.replace_segments(id, 1, {Segment{.vid = "V" + std::to_string(i % 2), .fseq = i, .seg_size = 3},
                                      Segment{.vid = "W" + std::to_string(i % 2), .fseq = i, .seg_size = 7}});
  }
  stop = true;
  reader.join();
  EXPECT_EQ(bad.load(), 0);
}

using test::dump;
using test::dump_oracle;
using test::run_op;
using test::run_oracle;

class NsOracleTest : public ::testing::TestWithParam<int> {};

TEST_P(NsOracleTest, RandomScriptMatchesTreeModel) {
  Catalog catalog(CatalogOptions{.implicit_dirs = {"/castor/cern.ch/user"}});
  Dispatcher d = make_dispatcher(catalog);
  auto connector = std::make_shared<Connector>();
  connector->register_loopback("ns", &d);
  RouteTable routes;
  routes.add({"cern.ch", "user", "loop://ns", 0});
  NsClient client(routes, connector);

  test::TreeOracle oracle;
  oracle.mkdir("/castor/cern.ch");
  oracle.mkdir("/castor/cern.ch/user");
  std::mt19937_64 rng(GetParam());
  const std::string base = "/castor/cern.ch/user";
  for (int i = 0; i < 500; ++i) {
    const test::NsOp op = test::random_ns_op(rng, base);
    ASSERT_EQ(run_op(client, op), run_oracle(oracle, op)) << "op " << i << " kind " << op.kind << " " << op.a << " " << op.b;
    if (i % 25 == 0) ASSERT_EQ(dump(client, "/castor"), dump_oracle(oracle.root()));
  }
  EXPECT_EQ(dump(client, "/castor"), dump_oracle(oracle.root()));
}

INSTANTIATE_TEST_SUITE_P(Seeds, NsOracleTest, ::testing::Values(1, 2, 3));

TEST(NsMkdirOracleTest, FiveHundredMkdirsMatchModel) {
  Catalog catalog(CatalogOptions{.implicit_dirs = {"/castor/cern.ch/user"}});
  test::TreeOracle oracle;
  oracle.mkdir("/castor/cern.ch");
  oracle.mkdir("/castor/cern.ch/user");
  std::mt19937_64 rng(42);
  int created = 0;
  while (created < 500) {
    const std::string p = test::random_castor_path(rng, "/castor/cern.ch/user", 6);
    std::optional<Errc> got;
    try {
      catalog.mkdir(p, 0755, 0, 0);
    } catch (const CastorError& e) {
      got = e.code();
    }
    ASSERT_EQ(got, oracle.mkdir(p));
    if (!got) ++created;
  }
  std::function<Json(const std::string&)> walk = [&](const std::string& p) {
    Json out = Json::object();
    for (const auto& e : catalog.list_dir(p)) out[e.name] = walk(p + "/" + e.name);
    return out;
  };
  EXPECT_EQ(walk("/castor"), dump_oracle(oracle.root()));
}

TEST(NsDurabilityTest, JournalReplayRestoresState) {
  test::TempDir dir;
  std::mt19937_64 rng(99);
  std::vector<std::pair<uint64_t, uint64_t>> sizes;
  Json before;
  {
    Catalog c(CatalogOptions{.implicit_dirs = {"/castor/cern.ch"}, .journal_dir = dir.path(),
                             .journal = {.sync = false, .snapshot_every = 37}});
    for (int i = 0; i < 120; ++i) {
      const uint64_t id = c.create_file("/castor/cern.ch/f" + std::to_string(i), 0644, 0, 0);
      const uint64_t size = rng();
      c.set_file_size(id, size, static_cast<uint32_t>(rng()));
      sizes.emplace_back(id, size);
      if (i % 3 == 0) c.rename("/castor/cern.ch/f" + std::to_string(i), "/castor/cern.ch/g" + std::to_string(i));
      if (i % 7 == 0) c.add_segment(id, Segment{.vid = "T" + std::to_string(i), .fseq = 1, .seg_size = size / 2});
    }
    c.unlink("/castor/cern.ch/f1");
    for (const auto& e : c.list_dir("/castor/cern.ch")) before.push_back({e, c.get_segments(e.file_id)});
  }
  Catalog c(CatalogOptions{.implicit_dirs = {"/castor/cern.ch"}, .journal_dir = dir.path(),
                           .journal = {.sync = false}});
  Json after;
  for (const auto& e : c.list_dir("/castor/cern.ch")) after.push_back({e, c.get_segments(e.file_id)});
  EXPECT_EQ(after, before);
  for (const auto& [id, size] : sizes) {
    if (id != sizes[1].first) EXPECT_EQ(c.stat_id(id).size_bytes, size);
  }
  // The id counter survives too.
  EXPECT_GT(c.create_file("/castor/cern.ch/new", 0644, 0, 0), sizes.back().first);
}

TEST(NsMultiInstanceTest, TwoInstancesRouteByPathAndId) {
  Catalog user(CatalogOptions{.instance_id = 0, .implicit_dirs = {"/castor/cern.ch/user"}});
  Catalog data(CatalogOptions{.instance_id = 1, .implicit_dirs = {"/castor/cnaf.infn.it/data"}});
  Dispatcher du = make_dispatcher(user);
  Dispatcher dd = make_dispatcher(data);
  auto connector = std::make_shared<Connector>();
  connector->register_loopback("ns-user", &du);
  connector->register_loopback("ns-data", &dd);
  NsClient client(two_instance_routes(), connector);
  const uint64_t a = client.create_file("/castor/cern.ch/user/a");
  const uint64_t b = client.create_file("/castor/cnaf.infn.it/data/b");
  EXPECT_EQ(instance_of(a), 0);
  EXPECT_EQ(instance_of(b), 1);
  EXPECT_NO_THROW(user.stat("/castor/cern.ch/user/a"));
  EXPECT_EQ(code_of([&] { user.stat("/castor/cnaf.infn.it/data/b"); }), Errc::kNotFound);
  EXPECT_EQ(client.path_of(b), "/castor/cnaf.infn.it/data/b");
  client.set_file_size(b, 5, std::nullopt);
  EXPECT_EQ(client.stat("/castor/cnaf.infn.it/data/b").size_bytes, 5u);
  EXPECT_EQ(code_of([&] { client.rename("/castor/cern.ch/user/a", "/castor/cnaf.infn.it/data/a"); }),
            Errc::kInvalidArgument);
  EXPECT_EQ(code_of([&] { client.stat("/castor/cern.ch/other/x"); }), Errc::kUnknownRoute);
}

}  // namespace
}  // namespace castor::ns
