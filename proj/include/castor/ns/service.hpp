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

#include <map>
#include <memory>
#include <mutex>

#include "castor/common/rpc.hpp"
#include "castor/ns/catalog.hpp"

namespace castor::ns {

// Wire ops of a name server instance ("ns.*").
Dispatcher make_dispatcher(Catalog& catalog);

// Client side of the name server: picks the instance for each call from the
// route table and speaks the shared framed-JSON protocol to it.
class NsClient {
 public:
  NsClient(RouteTable routes, std::shared_ptr<Connector> connector);

  ServerRoute resolve_route(std::string_view path) const { return routes_.resolve(path); }
  const RouteTable& routes() const { return routes_; }

  uint64_t mkdir(std::string_view path, uint32_t mode = 0755, uint32_t uid = 0, uint32_t gid = 0);
  uint64_t create_file(std::string_view path, uint32_t mode = 0644, uint32_t uid = 0, uint32_t gid = 0);
  NsEntry stat(std::string_view path);
  NsEntry stat_id(uint64_t file_id);
  std::string path_of(uint64_t file_id);
  void unlink(std::string_view path);
  void rmdir(std::string_view path);
  void rename(std::string_view old_path, std::string_view new_path);
  std::vector<NsEntry> list_dir(std::string_view path);

  void add_segment(uint64_t file_id, const Segment& segment);
  void replace_segments(uint64_t file_id, uint32_t copy_no, const std::vector<Segment>& segments);
  std::vector<Segment> get_segments(uint64_t file_id);
  std::vector<Segment> segments_on_vid(const std::string& vid);
  void set_file_size(uint64_t file_id, uint64_t size_bytes, std::optional<uint32_t> checksum);

 private:
  RpcClient& client_for(const std::string& address);
  RpcClient& for_path(std::string_view path);
  RpcClient& for_id(uint64_t file_id);

  RouteTable routes_;
  std::shared_ptr<Connector> connector_;
  std::mutex mu_;
  std::map<std::string, std::unique_ptr<RpcClient>> clients_;
};

}  // namespace castor::ns
