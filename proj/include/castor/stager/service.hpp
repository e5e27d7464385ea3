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

#include <memory>
#include <string>
#include <vector>

#include "castor/common/rpc.hpp"
#include "castor/stager/stager.hpp"

namespace castor::stager {

// Wire ops of the stager ("stager.*").
Dispatcher make_dispatcher(Stager& stager);

class StagerClient {
 public:
  explicit StagerClient(std::shared_ptr<Transport> transport) : rpc_(std::move(transport)) {}

  Location stage_out(const std::string& path, uint64_t size_hint, const std::string& pool = "");
  fileio::Digest put_done(const std::string& path);
  Location stage_in(const std::string& path, bool wait = true, const std::string& pool = "");
  std::vector<DiskCopy> query(const std::string& pool = "");
  MigrationReport run_migrator(const std::string& pool);
  GcReport run_gc(const std::string& pool);
  GcReport purge(const std::string& path);
  RepackReport repack(const std::string& vid, const std::string& target_pool, const std::string& disk_pool = "");
  std::vector<DiskPool> pools();
  StagerStats stats();

 private:
  RpcClient rpc_;
};

}  // namespace castor::stager
