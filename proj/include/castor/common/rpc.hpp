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

#include <functional>
#include <map>
#include <memory>
#include <string>

#include <json.hpp>

#include "castor/common/error.hpp"
#include "castor/common/transport.hpp"

namespace castor {

using Json = nlohmann::json;

// JSON control protocol. Requests: {"op", "args", "req_id"}; responses:
// {"req_id", "ok", "value"} or {"req_id", "ok": false, "error": {"code", "message"}}.
class Dispatcher : public FrameHandler {
 public:
  using Handler = std::function<Json(const Json& args)>;

  void add(const std::string& op, Handler handler);
  std::string handle_frame(std::string_view body, uint64_t connection_id) override;

  // Runs an op without framing; throws what the handler throws.
  Json dispatch(const std::string& op, const Json& args) const;

 private:
  std::map<std::string, Handler> handlers_;
};

Json make_error_response(const std::string& req_id, Errc code, const std::string& message);

class RpcClient {
 public:
  explicit RpcClient(std::shared_ptr<Transport> transport);

  // Returns "value" of a successful response, throws CastorError with the remote
  // code otherwise.
  Json call(const std::string& op, const Json& args = Json::object());

  const std::string& address() const { return transport_->address(); }

 private:
  std::shared_ptr<Transport> transport_;
  std::string prefix_;
  std::atomic<uint64_t> counter_{0};
};

// Typed access helpers for request arguments; a missing or mistyped key is an
// InvalidArgument on the wire.
template <typename T>
T arg(const Json& args, const char* key) {
  auto it = args.find(key);
  if (it == args.end()) raise(Errc::kInvalidArgument, std::string("missing argument '") + key + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    raise(Errc::kInvalidArgument, std::string("bad type for argument '") + key + "'");
  }
}

template <typename T>
T arg_or(const Json& args, const char* key, T fallback) {
  auto it = args.find(key);
  if (it == args.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    raise(Errc::kInvalidArgument, std::string("bad type for argument '") + key + "'");
  }
}

}  // namespace castor
