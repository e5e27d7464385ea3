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

#include "castor/vdqm/service.hpp"

namespace castor::vdqm {

namespace {

Json optional_drive(const std::optional<std::string>& d) { return d ? Json(*d) : Json(); }

std::optional<std::string> to_optional(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::string>();
}

}  // namespace

Dispatcher make_dispatcher(Queue& queue) {
  Dispatcher d;
  d.add("vdqm.ping", [](const Json&) { return Json("pong"); });
  d.add("vdqm.register_drive", [&queue](const Json& a) {
    queue.register_drive(arg<DriveRecord>(a, "drive"));
    return Json();
  });
  d.add("vdqm.set_drive_state", [&queue](const Json& a) {
    queue.set_drive_state(arg<std::string>(a, "drive"), parse_state(arg<std::string>(a, "state")));
    return Json();
  });
  d.add("vdqm.submit", [&queue](const Json& a) {
    return Json{{"req_id", queue.submit_request(arg<std::string>(a, "vid"), parse_access(arg<std::string>(a, "access")),
                                                arg<std::string>(a, "model"),
                                                arg_or<std::string>(a, "client_addr", ""))}};
  });
  d.add("vdqm.release", [&queue](const Json& a) {
    queue.release_drive(arg<std::string>(a, "drive"), arg<uint64_t>(a, "req_id"));
    return Json();
  });
  d.add("vdqm.cancel", [&queue](const Json& a) {
    queue.cancel(arg<uint64_t>(a, "req_id"));
    return Json();
  });
  d.add("vdqm.cancel_client", [&queue](const Json& a) {
    return Json(queue.cancel_client(arg<std::string>(a, "client_addr")));
  });
  d.add("vdqm.snapshot", [&queue](const Json&) { return Json(queue.queue_snapshot()); });
  d.add("vdqm.assignment", [&queue](const Json& a) { return optional_drive(queue.assignment(arg<uint64_t>(a, "req_id"))); });
  d.add("vdqm.wait", [&queue](const Json& a) {
    const auto ms = std::min<uint64_t>(arg_or<uint64_t>(a, "timeout_ms", 0), 60000);
    return optional_drive(queue.wait(arg<uint64_t>(a, "req_id"), std::chrono::milliseconds(ms)));
  });
  return d;
}

void VdqmClient::register_drive(const DriveRecord& drive) { rpc_.call("vdqm.register_drive", {{"drive", drive}}); }

void VdqmClient::set_drive_state(const std::string& drive, DriveState state) {
  rpc_.call("vdqm.set_drive_state", {{"drive", drive}, {"state", state_name(state)}});
}

uint64_t VdqmClient::submit_request(const std::string& vid, Access access, const std::string& model,
                                    const std::string& client_addr) {
  return rpc_
      .call("vdqm.submit", {{"vid", vid}, {"access", access_name(access)}, {"model", model}, {"client_addr", client_addr}})
      .at("req_id")
      .get<uint64_t>();
}

void VdqmClient::release_drive(const std::string& drive, uint64_t req_id) {
  rpc_.call("vdqm.release", {{"drive", drive}, {"req_id", req_id}});
}

void VdqmClient::cancel(uint64_t req_id) { rpc_.call("vdqm.cancel", {{"req_id", req_id}}); }

size_t VdqmClient::cancel_client(const std::string& client_addr) {
  return rpc_.call("vdqm.cancel_client", {{"client_addr", client_addr}}).get<size_t>();
}

Snapshot VdqmClient::queue_snapshot() { return rpc_.call("vdqm.snapshot").get<Snapshot>(); }

std::optional<std::string> VdqmClient::assignment(uint64_t req_id) {
  return to_optional(rpc_.call("vdqm.assignment", {{"req_id", req_id}}));
}

std::optional<std::string> VdqmClient::wait(uint64_t req_id, std::chrono::milliseconds timeout) {
  return to_optional(rpc_.call("vdqm.wait", {{"req_id", req_id}, {"timeout_ms", timeout.count()}}));
}

}  // namespace castor::vdqm
