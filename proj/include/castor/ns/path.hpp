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

#include <string>
#include <string_view>
#include <vector>

#include "castor/ns/types.hpp"

namespace castor::ns {

inline constexpr std::string_view kRootPath = "/castor";
inline constexpr size_t kMaxComponentBytes = 255;
inline constexpr size_t kMaxDepth = 64;

// Components below "/castor"; "/castor" itself yields an empty list. A single
// trailing '/' is tolerated. Throws kMalformedPath.
std::vector<std::string> split_path(std::string_view path);
std::string join_path(const std::vector<std::string>& components);

bool is_castor_path(std::string_view path);

// Maps "/castor/<domain>/<top_dir>/..." to the instance serving it.
class RouteTable {
 public:
  void add(ServerRoute route);
  ServerRoute resolve(std::string_view path) const;
  // Route for an id-based call, via the instance_id in the file_id.
  const ServerRoute& for_file_id(uint64_t file_id) const;
  // Route used for paths above the third level (e.g. "/castor").
  const ServerRoute& default_route() const;
  const std::vector<ServerRoute>& routes() const { return routes_; }

 private:
  std::vector<ServerRoute> routes_;
};

}  // namespace castor::ns
