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

#include "castor/rfio/disk_server.hpp"

#include <dirent.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>

#include "castor/common/file_io.hpp"
#include "castor/common/frame.hpp"

namespace castor::rfio {

namespace fs = std::filesystem;

namespace {

std::string error_frame(Errc code, const std::string& message) {
  return encode_json(make_error_response("", code, message));
}

std::span<const std::byte> bytes_of(std::string_view s) { return std::as_bytes(std::span(s.data(), s.size())); }

}  // namespace

DiskServer::DiskServer(DiskServerOptions options) : options_(std::move(options)) {
  for (auto& r : options_.roots) r = r.lexically_normal();
  json_.add("rfiod.ping", [](const Json&) { return Json("pong"); });
  json_.add("rfiod.checksum", [this](const Json& a) {
    const auto d = fileio::digest(checked(arg<std::string>(a, "path")));
    return Json{{"size", d.size}, {"crc32", d.crc32}};
  });
  json_.add("rfiod.size", [this](const Json& a) {
    auto fd = fileio::open_read(checked(arg<std::string>(a, "path")));
    return Json(fileio::size_of(fd.get()));
  });
  json_.add("rfiod.remove", [this](const Json& a) {
    const fs::path p = checked(arg<std::string>(a, "path"));
    if (::unlink(p.c_str()) == 0) return Json(true);
    if (errno == ENOENT) return Json(false);
    raise_errno("unlink " + p.string());
  });
  json_.add("rfiod.mkdirs", [this](const Json& a) {
    std::error_code ec;
    fs::create_directories(checked(arg<std::string>(a, "path")), ec);
    if (ec) raise(Errc::kIoError, "mkdirs: " + ec.message());
    return Json();
  });
  json_.add("rfiod.list", [this](const Json& a) {
    const fs::path dir = checked(arg<std::string>(a, "path"));
    Json out = Json::array();
    std::error_code ec;
    for (const auto& e : fs::directory_iterator(dir, ec)) {
      if (e.is_regular_file()) out.push_back({{"name", e.path().filename().string()}, {"size", e.file_size()}});
    }
    if (ec) raise(ec == std::errc::no_such_file_or_directory ? Errc::kNotFound : Errc::kIoError, dir.string());
    return out;
  });
  json_.add("rfiod.extents", [this](const Json& a) {
    auto fd = fileio::open_read(checked(arg<std::string>(a, "path")));
    Json out = Json::array();
    for (const auto& e : fileio::data_extents(fd.get(), arg<uint64_t>(a, "offset"), arg<uint64_t>(a, "length"))) {
      out.push_back(Json::array({e.offset, e.length}));
    }
    return out;
  });
}

DiskServer::~DiskServer() = default;

fs::path DiskServer::checked(const std::string& raw) const {
  const fs::path p = fs::path(raw).lexically_normal();
  if (!p.is_absolute()) raise(Errc::kInvalidArgument, "physical path must be absolute: " + raw);
  for (const auto& root : options_.roots) {
    auto [r, q] = std::mismatch(root.begin(), root.end(), p.begin(), p.end());
    if (r == root.end() || (r->empty() && std::next(r) == root.end())) return p;
  }
  raise(Errc::kInvalidArgument, raw + " is outside the served filesystems");
}

std::shared_ptr<DiskServer::Handle> DiskServer::find(uint64_t id) const {
  std::shared_lock lock(mu_);
  auto it = handles_.find(id);
  if (it == handles_.end()) raise(Errc::kBadHandle, "no handle " + std::to_string(id));
  return it->second;
}

void DiskServer::close_handle(uint64_t id) {
  std::unique_lock lock(mu_);
  auto it = handles_.find(id);
  if (it == handles_.end()) return;
  if (it->second->write) writers_.erase(it->second->path);
  handles_.erase(it);
}

size_t DiskServer::open_handles() const {
  std::shared_lock lock(mu_);
  return handles_.size();
}

DataFrame DiskServer::serve_data(const DataFrame& req, uint64_t connection_id) {
  DataFrame reply;
  reply.opcode = req.opcode;
  reply.handle_id = req.handle_id;
  if (req.opcode == Opcode::kOpen) {
    if (req.payload.empty()) raise(Errc::kProtocolError, "OPEN without mode");
    const uint8_t mode = static_cast<uint8_t>(req.payload[0]);
    if (mode > 2) raise(Errc::kInvalidArgument, "bad open mode");
    auto h = std::make_shared<Handle>();
    h->path = checked(req.payload.substr(1));
    h->write = mode != static_cast<uint8_t>(OpenMode::kRead);
    h->owner = connection_id;
    std::unique_lock lock(mu_);
    if (h->write && writers_.count(h->path)) raise(Errc::kBusy, h->path.string() + " already has a writer");
    h->fd = h->write ? fileio::open_write(h->path, mode == static_cast<uint8_t>(OpenMode::kWriteTruncate))
                     : fileio::open_read(h->path);
    h->id = next_handle_++;
    if (h->write) writers_.insert(h->path);
    handles_[h->id] = h;
    reply.handle_id = h->id;
    reply.offset = fileio::size_of(h->fd.get());
    return reply;
  }
  auto h = find(req.handle_id);
  switch (req.opcode) {
    case Opcode::kRead: {
      if (req.payload.size() != 4) raise(Errc::kProtocolError, "READ payload must be a u32 length");
      const uint32_t want = wire::get_u32(req.payload, 0);
      if (want > kMaxPayload) raise(Errc::kInvalidArgument, "READ over 1 MiB");
      reply.payload.resize(want);
      const size_t got = fileio::pread_upto(h->fd.get(), std::as_writable_bytes(std::span(reply.payload)), req.offset);
      reply.payload.resize(got);
      reply.offset = req.offset;
      return reply;
    }
    case Opcode::kWrite:
      if (!h->write) raise(Errc::kBadHandle, "handle " + std::to_string(h->id) + " is read-only");
      fileio::write_sparse(h->fd.get(), bytes_of(req.payload), req.offset);
      reply.offset = req.offset + req.payload.size();
      return reply;
    case Opcode::kLseek:
    case Opcode::kStat:
      reply.offset = fileio::size_of(h->fd.get());
      return reply;
    case Opcode::kClose:
      reply.offset = fileio::size_of(h->fd.get());
      close_handle(h->id);
      return reply;
    case Opcode::kOpen:
      break;
  }
  raise(Errc::kProtocolError, "unhandled opcode");
}

std::string DiskServer::handle_frame(std::string_view body, uint64_t connection_id) {
  if (body.empty()) return error_frame(Errc::kProtocolError, "empty frame");
  if (!is_data(body)) {
    if (static_cast<uint8_t>(body[0]) != kMarkerJson) return error_frame(Errc::kProtocolError, "unknown marker");
    std::string reply(1, static_cast<char>(kMarkerJson));
    reply += json_.handle_frame(body.substr(1), connection_id);
    return reply;
  }
  try {
    return encode_data(serve_data(decode_data(body), connection_id));
  } catch (const CastorError& e) {
    return error_frame(e.code(), e.detail());
  } catch (const std::exception& e) {
    return error_frame(Errc::kInternal, e.what());
  }
}

void DiskServer::on_disconnect(uint64_t connection_id) {
  std::vector<uint64_t> owned;
  {
    std::shared_lock lock(mu_);
    for (const auto& [id, h] : handles_) {
      if (h->owner == connection_id) owned.push_back(id);
    }
  }
  for (uint64_t id : owned) close_handle(id);
}

}  // namespace castor::rfio
