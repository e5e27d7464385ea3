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

#include "castor/rfio/disk_client.hpp"

#include <algorithm>

#include "castor/common/frame.hpp"

namespace castor::rfio {

DiskClient::DiskClient(std::shared_ptr<Transport> transport)
    : rpc_(std::make_shared<JsonChannel>(std::move(transport))) {}

fileio::Digest DiskClient::checksum(const std::string& path) {
  const Json v = rpc_.call("rfiod.checksum", {{"path", path}});
  return {v.at("size").get<uint64_t>(), v.at("crc32").get<uint32_t>()};
}

bool DiskClient::remove(const std::string& path) { return rpc_.call("rfiod.remove", {{"path", path}}).get<bool>(); }

void DiskClient::mkdirs(const std::string& path) { rpc_.call("rfiod.mkdirs", {{"path", path}}); }

std::vector<std::pair<std::string, uint64_t>> DiskClient::list(const std::string& dir) {
  std::vector<std::pair<std::string, uint64_t>> out;
  for (const auto& e : rpc_.call("rfiod.list", {{"path", dir}})) {
    out.emplace_back(e.at("name").get<std::string>(), e.at("size").get<uint64_t>());
  }
  return out;
}

std::vector<fileio::Extent> DiskClient::extents(const std::string& path, uint64_t offset, uint64_t length) {
  std::vector<fileio::Extent> out;
  for (const auto& e : rpc_.call("rfiod.extents", {{"path", path}, {"offset", offset}, {"length", length}})) {
    out.push_back({e.at(0).get<uint64_t>(), e.at(1).get<uint64_t>()});
  }
  return out;
}

uint64_t DiskClient::size(const std::string& path) { return rpc_.call("rfiod.size", {{"path", path}}).get<uint64_t>(); }

DiskSession::DiskSession(std::shared_ptr<Transport> transport, const std::string& path, OpenMode mode)
    : transport_(std::move(transport)), path_(path) {
  DataFrame open;
  open.opcode = Opcode::kOpen;
  open.payload.push_back(static_cast<char>(mode));
  open.payload += path;
  handle_ = exchange(open).handle_id;
  open_ = true;
}

DiskSession::~DiskSession() {
  if (!open_) return;
  try {
    close();
  } catch (const std::exception&) {
    // The connection going away releases the handle anyway.
  }
}

DataFrame DiskSession::exchange(const DataFrame& request) {
  const std::string reply = transport_->roundtrip(encode_data(request));
  if (!is_data(reply)) {
    const Json j = Json::parse(strip_marker(reply), nullptr, false);
    if (j.is_discarded() || !j.contains("error")) raise(Errc::kProtocolError, "unexpected disk server reply");
    const Errc code = errc_from_name(j["error"].value("code", std::string("Internal")));
    raise(code, j["error"].value("message", std::string()));
  }
  DataFrame f = decode_data(reply);
  if (f.opcode != request.opcode) raise(Errc::kProtocolError, "reply opcode does not match request");
  return f;
}

size_t DiskSession::read(uint64_t offset, std::span<std::byte> buf) {
  if (!open_) raise(Errc::kBadHandle, "session closed");
  size_t done = 0;
  while (done < buf.size()) {
    DataFrame req;
    req.opcode = Opcode::kRead;
    req.handle_id = handle_;
    req.offset = offset + done;
    const uint32_t want = static_cast<uint32_t>(std::min(buf.size() - done, kMaxPayload));
    wire::put_u32(req.payload, want);
    const DataFrame r = exchange(req);
    if (r.payload.size() > want) raise(Errc::kProtocolError, "READ reply longer than asked");
    std::memcpy(buf.data() + done, r.payload.data(), r.payload.size());
    done += r.payload.size();
    if (r.payload.size() < want) break;
  }
  return done;
}

void DiskSession::write(uint64_t offset, std::span<const std::byte> data) {
  if (!open_) raise(Errc::kBadHandle, "session closed");
  size_t done = 0;
  do {
    DataFrame req;
    req.opcode = Opcode::kWrite;
    req.handle_id = handle_;
    req.offset = offset + done;
    const size_t n = std::min(data.size() - done, kMaxPayload);
    req.payload.assign(reinterpret_cast<const char*>(data.data() + done), n);
    exchange(req);
    done += n;
  } while (done < data.size());
}

uint64_t DiskSession::size() {
  if (!open_) raise(Errc::kBadHandle, "session closed");
  DataFrame req;
  req.opcode = Opcode::kStat;
  req.handle_id = handle_;
  return exchange(req).offset;
}

uint64_t DiskSession::close() {
  if (!open_) raise(Errc::kBadHandle, "session closed");
  open_ = false;
  DataFrame req;
  req.opcode = Opcode::kClose;
  req.handle_id = handle_;
  return exchange(req).offset;
}

}  // namespace castor::rfio
