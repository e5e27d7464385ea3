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

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <vector>

#include "castor/common/net.hpp"
#include "castor/common/rpc.hpp"
#include "castor/rfio/protocol.hpp"

namespace castor::rfio {

struct DiskServerOptions {
  // Physical paths must live under one of these.
  std::vector<std::filesystem::path> roots;
};

// The rfiod analogue: physical IO on local files plus session bookkeeping. At
// most one write handle per file; readers may open a file being written and
// see whatever bytes are there.
class DiskServer final : public FrameHandler {
 public:
  explicit DiskServer(DiskServerOptions options);
  ~DiskServer() override;

  std::string handle_frame(std::string_view body, uint64_t connection_id) override;
  void on_disconnect(uint64_t connection_id) override;

  size_t open_handles() const;

 private:
  struct Handle {
    uint64_t id = 0;
    std::filesystem::path path;
    net::UniqueFd fd;
    bool write = false;
    uint64_t owner = 0;
  };

  std::filesystem::path checked(const std::string& path) const;
  DataFrame serve_data(const DataFrame& request, uint64_t connection_id);
  std::shared_ptr<Handle> find(uint64_t id) const;
  void close_handle(uint64_t id);

  DiskServerOptions options_;
  Dispatcher json_;
  mutable std::shared_mutex mu_;
  std::map<uint64_t, std::shared_ptr<Handle>> handles_;
  std::set<std::filesystem::path> writers_;
  uint64_t next_handle_ = 1;
};

}  // namespace castor::rfio
