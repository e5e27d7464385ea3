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

#include "castor/common/rpc.hpp"
#include "castor/vmgr/plant.hpp"
#include "castor/vmgr/registry.hpp"

namespace castor::vmgr {

// Wire ops of the volume manager ("vmgr.*"). The plant is served read-only.
Dispatcher make_dispatcher(Registry& registry, const Plant& plant);

class VmgrClient {
 public:
  explicit VmgrClient(std::shared_ptr<Transport> transport) : rpc_(std::move(transport)) {}

  void add_pool(const TapePool& pool);
  void add_volume(const TapeVolume& volume);
  void set_status(const std::string& vid, uint32_t flags);
  TapeVolume query(const std::string& vid);
  std::vector<TapeVolume> list(const std::string& pool = "");
  std::vector<TapePool> pools();
  TapeVolume select_tape_for_migration(const std::string& pool, uint64_t requested_bytes,
                                       const std::vector<std::string>& exclude_vids = {});
  void update_after_write(const std::string& vid, uint64_t bytes_written, uint32_t files_written,
                          bool keep_busy = false);
  void release(const std::string& vid);
  std::vector<DrivePlantModel> plant_models();
  std::vector<DriveSpec> plant_drives();

 private:
  RpcClient rpc_;
};

void to_json(Json& j, const DriveSpec& d);
void from_json(const Json& j, DriveSpec& d);

}  // namespace castor::vmgr
