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

#include "castor/vdqm/queue.hpp"

namespace castor::vdqm {

// Wire ops of the drive queue manager ("vdqm.*").
Dispatcher make_dispatcher(Queue& queue);

class VdqmClient {
 public:
  explicit VdqmClient(std::shared_ptr<Transport> transport) : rpc_(std::move(transport)) {}

  void register_drive(const DriveRecord& drive);
  void set_drive_state(const std::string& drive, DriveState state);
  uint64_t submit_request(const std::string& vid, Access access, const std::string& model,
                          const std::string& client_addr = "");
  void release_drive(const std::string& drive, uint64_t req_id);
  void cancel(uint64_t req_id);
  size_t cancel_client(const std::string& client_addr);
  Snapshot queue_snapshot();
  std::optional<std::string> assignment(uint64_t req_id);
  std::optional<std::string> wait(uint64_t req_id, std::chrono::milliseconds timeout);

 private:
  RpcClient rpc_;
};

}  // namespace castor::vdqm
