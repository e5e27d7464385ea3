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

#include "castor/ns/path.hpp"

#include "castor/common/error.hpp"

namespace castor::ns {

std::string_view kind_name(EntryKind kind) { return kind == EntryKind::kDirectory ? "directory" : "file"; }

void to_json(Json& j, const NsEntry& e) {
  j = Json{{"file_id", e.file_id},   {"parent_id", e.parent_id}, {"name", e.name},
           {"kind", kind_name(e.kind)}, {"size_bytes", e.size_bytes}, {"mode", e.mode},
           {"uid", e.uid},           {"gid", e.gid},             {"ctime_us", e.ctime_us},
           {"mtime_us", e.mtime_us}};
  j["checksum"] = e.checksum ? Json(*e.checksum) : Json();
}

void from_json(const Json& j, NsEntry& e) {
  e.file_id = j.at("file_id").get<uint64_t>();
  e.parent_id = j.at("parent_id").get<uint64_t>();
  e.name = j.at("name").get<std::string>();
  e.kind = j.at("kind").get<std::string>() == "directory" ? EntryKind::kDirectory : EntryKind::kFile;
  e.size_bytes = j.at("size_bytes").get<uint64_t>();
  e.mode = j.at("mode").get<uint32_t>();
  e.uid = j.at("uid").get<uint32_t>();
  e.gid = j.at("gid").get<uint32_t>();
  e.ctime_us = j.at("ctime_us").get<int64_t>();
  e.mtime_us = j.at("mtime_us").get<int64_t>();
  e.checksum.reset();
  if (j.contains("checksum") && !j["checksum"].is_null()) e.checksum = j["checksum"].get<uint32_t>();
}

void to_json(Json& j, const Segment& s) {
  j = Json{{"file_id", s.file_id}, {"copy_no", s.copy_no}, {"seg_seq", s.seg_seq},        {"vid", s.vid},
           {"fseq", s.fseq},       {"seg_size", s.seg_size}, {"seg_checksum", s.seg_checksum}};
}

void from_json(const Json& j, Segment& s) {
  s.file_id = j.value("file_id", uint64_t{0});
  s.copy_no = j.value("copy_no", uint32_t{1});
  s.seg_seq = j.value("seg_seq", uint32_t{0});
  s.vid = j.at("vid").get<std::string>();
  s.fseq = j.at("fseq").get<uint32_t>();
  s.seg_size = j.at("seg_size").get<uint64_t>();
  s.seg_checksum = j.value("seg_checksum", uint32_t{0});
}

void to_json(Json& j, const ServerRoute& r) {
  j = Json{{"domain", r.domain},
           {"top_dir", r.top_dir},
           {"instance_addr", r.instance_addr},
           {"instance_id", r.instance_id},
           {"alias", r.alias()}};
}

void from_json(const Json& j, ServerRoute& r) {
  r.domain = j.at("domain").get<std::string>();
  r.top_dir = j.at("top_dir").get<std::string>();
  r.instance_addr = j.value("instance_addr", std::string());
  r.instance_id = j.value("instance_id", uint16_t{0});
}

bool is_castor_path(std::string_view path) {
  return path == kRootPath || (path.size() > kRootPath.size() && path.substr(0, kRootPath.size()) == kRootPath &&
                               path[kRootPath.size()] == '/');
}

std::vector<std::string> split_path(std::string_view path) {
  if (!is_castor_path(path)) raise(Errc::kMalformedPath, "path must be rooted at /castor: '" + std::string(path) + "'");
  std::string_view rest = path.substr(kRootPath.size());
  if (!rest.empty() && rest.back() == '/') rest.remove_suffix(1);
  std::vector<std::string> parts;
  while (!rest.empty()) {
    rest.remove_prefix(1);  // leading '/'
    const size_t slash = rest.find('/');
    const std::string_view comp = rest.substr(0, slash);
    if (comp.empty()) raise(Errc::kMalformedPath, "empty path component in '" + std::string(path) + "'");
    if (comp == "." || comp == "..") raise(Errc::kMalformedPath, "relative component in '" + std::string(path) + "'");
    if (comp.size() > kMaxComponentBytes) raise(Errc::kMalformedPath, "component longer than 255 bytes");
    parts.emplace_back(comp);
    if (parts.size() > kMaxDepth) raise(Errc::kMalformedPath, "path deeper than 64 components");
    rest = slash == std::string_view::npos ? std::string_view() : rest.substr(slash);
  }
  return parts;
}

std::string join_path(const std::vector<std::string>& components) {
  std::string out(kRootPath);
  for (const auto& c : components) {
    out.push_back('/');
    out += c;
  }
  return out;
}

void RouteTable::add(ServerRoute route) {
  for (auto& r : routes_) {
    if (r.domain == route.domain && r.top_dir == route.top_dir) {
      r = std::move(route);
      return;
    }
  }
  routes_.push_back(std::move(route));
}

ServerRoute RouteTable::resolve(std::string_view path) const {
  const auto parts = split_path(path);
  if (parts.size() < 2) {
    raise(Errc::kMalformedPath, "'" + std::string(path) + "' has no domain and top-level directory");
  }
  for (const auto& r : routes_) {
    if (r.domain == parts[0] && r.top_dir == parts[1]) return r;
  }
  raise(Errc::kUnknownRoute, "no name server instance for /castor/" + parts[0] + "/" + parts[1]);
}

const ServerRoute& RouteTable::for_file_id(uint64_t file_id) const {
  const uint16_t instance = instance_of(file_id);
  for (const auto& r : routes_) {
    if (r.instance_id == instance) return r;
  }
  raise(Errc::kUnknownRoute, "no name server instance with id " + std::to_string(instance));
}

const ServerRoute& RouteTable::default_route() const {
  if (routes_.empty()) raise(Errc::kUnknownRoute, "route table is empty");
  return routes_.front();
}

}  // namespace castor::ns
