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

#include "castor/stager/service.hpp"

namespace castor::stager {

Dispatcher make_dispatcher(Stager& stager) {
  Dispatcher d;
  d.add("stager.ping", [](const Json&) { return Json("pong"); });
  d.add("stager.stage_out", [&stager](const Json& a) {
    return Json(stager.stage_out(arg<std::string>(a, "path"), arg_or<uint64_t>(a, "size_hint", 0),
                                 arg_or<std::string>(a, "pool", "")));
  });
  d.add("stager.put_done", [&stager](const Json& a) {
    const auto digest = stager.put_done(arg<std::string>(a, "path"));
    return Json{{"size", digest.size}, {"crc32", digest.crc32}};
  });
  d.add("stager.stage_in", [&stager](const Json& a) {
    return Json(stager.stage_in(arg<std::string>(a, "path"), arg_or<bool>(a, "wait", true),
                                arg_or<std::string>(a, "pool", "")));
  });
  d.add("stager.query", [&stager](const Json& a) { return Json(stager.query(arg_or<std::string>(a, "pool", ""))); });
  d.add("stager.run_migrator",
        [&stager](const Json& a) { return Json(stager.run_migrator(arg_or<std::string>(a, "pool", ""))); });
  d.add("stager.run_gc", [&stager](const Json& a) { return Json(stager.run_gc(arg_or<std::string>(a, "pool", ""))); });
  d.add("stager.purge", [&stager](const Json& a) { return Json(stager.purge(arg<std::string>(a, "path"))); });
  d.add("stager.repack", [&stager](const Json& a) {
    return Json(stager.repack(arg<std::string>(a, "vid"), arg<std::string>(a, "target_pool"),
                              arg_or<std::string>(a, "disk_pool", "")));
  });
  d.add("stager.pools", [&stager](const Json&) { return Json(stager.pools()); });
  d.add("stager.stats", [&stager](const Json&) { return Json(stager.stats()); });
  return d;
}

Location StagerClient::stage_out(const std::string& path, uint64_t size_hint, const std::string& pool) {
  return rpc_.call("stager.stage_out", {{"path", path}, {"size_hint", size_hint}, {"pool", pool}}).get<Location>();
}

fileio::Digest StagerClient::put_done(const std::string& path) {
  const Json r = rpc_.call("stager.put_done", {{"path", path}});
  return fileio::Digest{r.at("size").get<uint64_t>(), r.at("crc32").get<uint32_t>()};
}

Location StagerClient::stage_in(const std::string& path, bool wait, const std::string& pool) {
  return rpc_.call("stager.stage_in", {{"path", path}, {"wait", wait}, {"pool", pool}}).get<Location>();
}

std::vector<DiskCopy> StagerClient::query(const std::string& pool) {
  return rpc_.call("stager.query", {{"pool", pool}}).get<std::vector<DiskCopy>>();
}

MigrationReport StagerClient::run_migrator(const std::string& pool) {
  return rpc_.call("stager.run_migrator", {{"pool", pool}}).get<MigrationReport>();
}

GcReport StagerClient::run_gc(const std::string& pool) {
  return rpc_.call("stager.run_gc", {{"pool", pool}}).get<GcReport>();
}

GcReport StagerClient::purge(const std::string& path) {
  return rpc_.call("stager.purge", {{"path", path}}).get<GcReport>();
}

RepackReport StagerClient::repack(const std::string& vid, const std::string& target_pool, const std::string& disk_pool) {
  return rpc_.call("stager.repack", {{"vid", vid}, {"target_pool", target_pool}, {"disk_pool", disk_pool}})
      .get<RepackReport>();
}

std::vector<DiskPool> StagerClient::pools() {
  return rpc_.call("stager.pools", Json::object()).get<std::vector<DiskPool>>();
}

StagerStats StagerClient::stats() { return rpc_.call("stager.stats", Json::object()).get<StagerStats>(); }

}  // namespace castor::stager
