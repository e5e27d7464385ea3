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

#include "castor/ns/service.hpp"

#include <algorithm>

namespace castor::ns {

namespace {

std::optional<uint32_t> optional_checksum(const Json& args) {
  if (!args.contains("checksum") || args["checksum"].is_null()) return std::nullopt;
  return arg<uint32_t>(args, "checksum");
}

}  // namespace

Dispatcher make_dispatcher(Catalog& catalog) {
  Dispatcher d;
  d.add("ns.ping", [](const Json&) { return Json("pong"); });
  d.add("ns.mkdir", [&catalog](const Json& a) {
    return Json{{"file_id", catalog.mkdir(arg<std::string>(a, "path"), arg_or<uint32_t>(a, "mode", 0755),
                                          arg_or<uint32_t>(a, "uid", 0), arg_or<uint32_t>(a, "gid", 0))}};
  });
  d.add("ns.create", [&catalog](const Json& a) {
    return Json{{"file_id", catalog.create_file(arg<std::string>(a, "path"), arg_or<uint32_t>(a, "mode", 0644),
                                                arg_or<uint32_t>(a, "uid", 0), arg_or<uint32_t>(a, "gid", 0))}};
  });
  d.add("ns.stat", [&catalog](const Json& a) { return Json(catalog.stat(arg<std::string>(a, "path"))); });
  d.add("ns.stat_id", [&catalog](const Json& a) { return Json(catalog.stat_id(arg<uint64_t>(a, "file_id"))); });
  d.add("ns.path_of", [&catalog](const Json& a) { return Json(catalog.path_of(arg<uint64_t>(a, "file_id"))); });
  d.add("ns.unlink", [&catalog](const Json& a) {
    catalog.unlink(arg<std::string>(a, "path"));
    return Json();
  });
  d.add("ns.rmdir", [&catalog](const Json& a) {
    catalog.rmdir(arg<std::string>(a, "path"));
    return Json();
  });
  d.add("ns.rename", [&catalog](const Json& a) {
    catalog.rename(arg<std::string>(a, "old_path"), arg<std::string>(a, "new_path"));
    return Json();
  });
  d.add("ns.list", [&catalog](const Json& a) { return Json(catalog.list_dir(arg<std::string>(a, "path"))); });
  d.add("ns.add_segment", [&catalog](const Json& a) {
    catalog.add_segment(arg<uint64_t>(a, "file_id"), arg<Segment>(a, "segment"));
    return Json();
  });
  d.add("ns.replace_segments", [&catalog](const Json& a) {
    catalog.replace_segments(arg<uint64_t>(a, "file_id"), arg<uint32_t>(a, "copy_no"),
                             arg<std::vector<Segment>>(a, "segments"));
    return Json();
  });
  d.add("ns.get_segments", [&catalog](const Json& a) { return Json(catalog.get_segments(arg<uint64_t>(a, "file_id"))); });
  d.add("ns.segments_on_vid", [&catalog](const Json& a) { return Json(catalog.segments_on_vid(arg<std::string>(a, "vid"))); });
  d.add("ns.set_file_size", [&catalog](const Json& a) {
    catalog.set_file_size(arg<uint64_t>(a, "file_id"), arg<uint64_t>(a, "size_bytes"), optional_checksum(a));
    return Json();
  });
  return d;
}

NsClient::NsClient(RouteTable routes, std::shared_ptr<Connector> connector)
    : routes_(std::move(routes)), connector_(std::move(connector)) {}

RpcClient& NsClient::client_for(const std::string& address) {
  std::lock_guard lock(mu_);
  auto& slot = clients_[address];
  if (!slot) slot = std::make_unique<RpcClient>(connector_->connect(address));
  return *slot;
}

RpcClient& NsClient::for_path(std::string_view path) {
  const auto parts = split_path(path);
  if (parts.size() < 2) return client_for(routes_.default_route().instance_addr);
  return client_for(routes_.resolve(path).instance_addr);
}

RpcClient& NsClient::for_id(uint64_t file_id) { return client_for(routes_.for_file_id(file_id).instance_addr); }

uint64_t NsClient::mkdir(std::string_view path, uint32_t mode, uint32_t uid, uint32_t gid) {
  return for_path(path)
      .call("ns.mkdir", {{"path", path}, {"mode", mode}, {"uid", uid}, {"gid", gid}})
      .at("file_id")
      .get<uint64_t>();
}

uint64_t NsClient::create_file(std::string_view path, uint32_t mode, uint32_t uid, uint32_t gid) {
  return for_path(path)
      .call("ns.create", {{"path", path}, {"mode", mode}, {"uid", uid}, {"gid", gid}})
      .at("file_id")
      .get<uint64_t>();
}

NsEntry NsClient::stat(std::string_view path) { return for_path(path).call("ns.stat", {{"path", path}}).get<NsEntry>(); }

NsEntry NsClient::stat_id(uint64_t file_id) {
  return for_id(file_id).call("ns.stat_id", {{"file_id", file_id}}).get<NsEntry>();
}

std::string NsClient::path_of(uint64_t file_id) {
  return for_id(file_id).call("ns.path_of", {{"file_id", file_id}}).get<std::string>();
}

void NsClient::unlink(std::string_view path) { for_path(path).call("ns.unlink", {{"path", path}}); }

void NsClient::rmdir(std::string_view path) { for_path(path).call("ns.rmdir", {{"path", path}}); }

void NsClient::rename(std::string_view old_path, std::string_view new_path) {
  RpcClient& from = for_path(old_path);
  RpcClient& to = for_path(new_path);
  if (&from != &to) raise(Errc::kInvalidArgument, "rename across name server instances is not supported");
  from.call("ns.rename", {{"old_path", old_path}, {"new_path", new_path}});
}

std::vector<NsEntry> NsClient::list_dir(std::string_view path) {
  return for_path(path).call("ns.list", {{"path", path}}).get<std::vector<NsEntry>>();
}

void NsClient::add_segment(uint64_t file_id, const Segment& segment) {
  for_id(file_id).call("ns.add_segment", {{"file_id", file_id}, {"segment", segment}});
}

void NsClient::replace_segments(uint64_t file_id, uint32_t copy_no, const std::vector<Segment>& segments) {
  for_id(file_id).call("ns.replace_segments", {{"file_id", file_id}, {"copy_no", copy_no}, {"segments", segments}});
}

std::vector<Segment> NsClient::get_segments(uint64_t file_id) {
  return for_id(file_id).call("ns.get_segments", {{"file_id", file_id}}).get<std::vector<Segment>>();
}

std::vector<Segment> NsClient::segments_on_vid(const std::string& vid) {
  std::vector<Segment> out;
  std::vector<std::string> seen;
  for (const auto& r : routes_.routes()) {
    if (std::find(seen.begin(), seen.end(), r.instance_addr) != seen.end()) continue;
    seen.push_back(r.instance_addr);
    auto part = client_for(r.instance_addr).call("ns.segments_on_vid", {{"vid", vid}}).get<std::vector<Segment>>();
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

void NsClient::set_file_size(uint64_t file_id, uint64_t size_bytes, std::optional<uint32_t> checksum) {
  for_id(file_id).call("ns.set_file_size", {{"file_id", file_id},
                                            {"size_bytes", size_bytes},
                                            {"checksum", checksum ? Json(*checksum) : Json()}});
}

}  // namespace castor::ns
