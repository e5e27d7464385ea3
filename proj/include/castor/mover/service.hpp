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
#include <string>
#include <vector>

#include "castor/mover/drive.hpp"

namespace castor::mover {

struct MoverOptions {
  std::filesystem::path tape_root;
  bool sync = true;
  std::shared_ptr<DiskAccess> disk;
};

struct DriveInfo {
  std::string name;
  std::string model;
  std::optional<std::string> mounted_vid;
  uint32_t head = 1;
  int64_t clock_us = 0;
};

// A tape server: a set of drives sharing one tape store.
class Mover {
 public:
  explicit Mover(MoverOptions options);

  SimulatedDrive& add_drive(const std::string& name, const std::string& model, const DriveTiming& timing);
  SimulatedDrive& drive(const std::string& name);
  std::vector<DriveInfo> drives() const;
  TapeStore& store() { return store_; }

 private:
  MoverOptions options_;
  TapeStore store_;
  std::map<std::string, std::unique_ptr<SimulatedDrive>> drives_;
};

Dispatcher make_dispatcher(Mover& mover);

class MoverClient {
 public:
  explicit MoverClient(std::shared_ptr<Transport> transport) : rpc_(std::move(transport)) {}

  TransferReport run_job(const std::string& drive, const TransferJob& job);
  void mount(const std::string& drive, const std::string& vid);
  void unmount(const std::string& drive);
  void sync_clock(const std::string& drive, int64_t t_us);
  std::vector<DriveInfo> drives();
  std::vector<TapeFileInfo> tape_files(const std::string& vid);
  void discard(const std::string& vid);

 private:
  RpcClient rpc_;
};

void to_json(Json& j, const DriveInfo& d);
void from_json(const Json& j, DriveInfo& d);
void to_json(Json& j, const TapeFileInfo& f);
void from_json(const Json& j, TapeFileInfo& f);

}  // namespace castor::mover
