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

#include "castor/rfio/protocol.hpp"

#include "castor/common/frame.hpp"

namespace castor::rfio {

std::string encode_data(const DataFrame& f) {
  if (f.payload.size() > kMaxPayload) raise(Errc::kInvalidArgument, "data frame payload over 1 MiB");
  std::string out;
  out.reserve(1 + kHeaderBytes + f.payload.size());
  out.push_back(static_cast<char>(kMarkerData));
  out.push_back(static_cast<char>(f.opcode));
  wire::put_u64(out, f.handle_id);
  wire::put_u64(out, f.offset);
  out.append(f.payload);
  return out;
}

std::string encode_json(const Json& message) {
  std::string out(1, static_cast<char>(kMarkerJson));
  out += message.dump();
  return out;
}

bool is_data(std::string_view body) { return !body.empty() && static_cast<uint8_t>(body[0]) == kMarkerData; }

DataFrame decode_data(std::string_view body) {
  if (!is_data(body) || body.size() < 1 + kHeaderBytes) raise(Errc::kProtocolError, "short or unmarked data frame");
  DataFrame f;
  const uint8_t op = static_cast<uint8_t>(body[1]);
  if (op < 1 || op > 6) raise(Errc::kProtocolError, "unknown data opcode " + std::to_string(op));
  f.opcode = static_cast<Opcode>(op);
  f.handle_id = wire::get_u64(body, 2);
  f.offset = wire::get_u64(body, 10);
  f.payload.assign(body.substr(1 + kHeaderBytes));
  if (f.payload.size() > kMaxPayload) raise(Errc::kProtocolError, "data frame payload over 1 MiB");
  return f;
}

std::string_view strip_marker(std::string_view body) {
  if (body.empty() || static_cast<uint8_t>(body[0]) != kMarkerJson) raise(Errc::kProtocolError, "expected a JSON frame");
  return body.substr(1);
}

std::string JsonChannel::roundtrip(std::string_view body) {
  std::string framed(1, static_cast<char>(kMarkerJson));
  framed.append(body);
  const std::string reply = inner_->roundtrip(framed);
  return std::string(strip_marker(reply));
}

}  // namespace castor::rfio
