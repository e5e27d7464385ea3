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

#include "castor/common/rpc.hpp"

#include <unistd.h>

namespace castor {

void Dispatcher::add(const std::string& op, Handler handler) { handlers_[op] = std::move(handler); }

Json Dispatcher::dispatch(const std::string& op, const Json& args) const {
  auto it = handlers_.find(op);
  if (it == handlers_.end()) raise(Errc::kInvalidArgument, "unknown op '" + op + "'");
  return it->second(args);
}

Json make_error_response(const std::string& req_id, Errc code, const std::string& message) {
  return Json{{"req_id", req_id},
              {"ok", false},
              {"error", {{"code", std::string(errc_name(code))}, {"message", message}}}};
}

std::string Dispatcher::handle_frame(std::string_view body, uint64_t /*connection_id*/) {
  std::string req_id;
  Json response;
  try {
    const Json request = Json::parse(body);
    req_id = request.value("req_id", std::string());
    const std::string op = arg<std::string>(request, "op");
    const Json args = request.contains("args") ? request["args"] : Json::object();
    response = Json{{"req_id", req_id}, {"ok", true}, {"value", dispatch(op, args)}};
  } catch (const CastorError& e) {
    response = make_error_response(req_id, e.code(), e.detail());
  } catch (const nlohmann::json::exception& e) {
    response = make_error_response(req_id, Errc::kInvalidArgument, e.what());
  } catch (const std::exception& e) {
    response = make_error_response(req_id, Errc::kInternal, e.what());
  }
  return response.dump();
}

RpcClient::RpcClient(std::shared_ptr<Transport> transport)
    : transport_(std::move(transport)),
      prefix_(std::to_string(::getpid()) + "-" +
              std::to_string(reinterpret_cast<uintptr_t>(this) & 0xFFFFFF) + "-") {}

Json RpcClient::call(const std::string& op, const Json& args) {
  const std::string req_id = prefix_ + std::to_string(counter_.fetch_add(1));
  const Json request{{"op", op}, {"args", args}, {"req_id", req_id}};
  const std::string reply = transport_->roundtrip(request.dump());
  Json response;
  try {
    response = Json::parse(reply);
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::kProtocolError, std::string("unparseable reply: ") + e.what());
  }
  if (response.value("req_id", std::string()) != req_id) {
    raise(Errc::kProtocolError, "reply req_id mismatch for " + op);
  }
  if (response.value("ok", false)) return response.contains("value") ? response["value"] : Json();
  const Json& err = response.at("error");
  throw CastorError(errc_from_name(err.value("code", std::string("Internal"))),
                    err.value("message", std::string()));
}

}  // namespace castor
