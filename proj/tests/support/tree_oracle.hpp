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
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "castor/common/error.hpp"

namespace castor::test {

// Plain map-of-maps model of a directory tree, written independently of the
// catalog. Paths are "/castor/..." strings; every op returns the error the
// catalog is expected to raise, or nullopt.
class TreeOracle {
 public:
  struct Node {
    bool dir = true;
    uint64_t size = 0;
    std::map<std::string, Node> kids;
  };

  std::optional<Errc> mkdir(const std::string& path) { return make(path, true); }
  std::optional<Errc> create(const std::string& path) { return make(path, false); }

  std::optional<Errc> unlink(const std::string& path) {
    auto parts = split(path);
    Node* parent = nullptr;
    auto err = lookup(parts, &parent);
    if (err) return err;
    if (parts.empty()) return Errc::kIsADirectory;
    if (parent->kids.at(parts.back()).dir) return Errc::kIsADirectory;
    parent->kids.erase(parts.back());
    return std::nullopt;
  }

  std::optional<Errc> rmdir(const std::string& path) {
    auto parts = split(path);
    Node* parent = nullptr;
    auto err = lookup(parts, &parent);
    if (err) return err;
    if (parts.empty()) return Errc::kInvalidArgument;
    Node& n = parent->kids.at(parts.back());
    if (!n.dir) return Errc::kNotADirectory;
    if (!n.kids.empty()) return Errc::kNotEmpty;
    parent->kids.erase(parts.back());
    return std::nullopt;
  }

  std::optional<Errc> rename(const std::string& from, const std::string& to) {
    auto src = split(from);
    auto dst = split(to);
    Node* src_parent = nullptr;
    if (auto err = lookup(src, &src_parent)) return err;
    if (src.empty()) return Errc::kInvalidArgument;
    if (dst.empty()) return Errc::kExists;
    std::vector<std::string> dst_dir(dst.begin(), dst.end() - 1);
    Node* dst_parent = nullptr;
    if (auto err = walk_dir(dst_dir, &dst_parent)) return err;
    // Destination directory equal to or below the source.
    if (dst_dir.size() >= src.size() && std::equal(src.begin(), src.end(), dst_dir.begin())) {
      return Errc::kCycleError;
    }
    if (dst_parent->kids.count(dst.back())) return Errc::kExists;
    Node moved = std::move(src_parent->kids.at(src.back()));
    src_parent->kids.erase(src.back());
    dst_parent->kids.emplace(dst.back(), std::move(moved));
    return std::nullopt;
  }

  // (name, is_dir, size) sorted by name; error if not a listable directory.
  std::optional<Errc> list(const std::string& path, std::vector<std::tuple<std::string, bool, uint64_t>>* out) {
    auto parts = split(path);
    Node* dir = nullptr;
    if (auto err = walk_dir(parts, &dir)) return err;
    out->clear();
    for (const auto& [name, n] : dir->kids) out->emplace_back(name, n.dir, n.size);
    return std::nullopt;
  }

  std::optional<Errc> stat(const std::string& path, bool* is_dir) {
    auto parts = split(path);
    Node* parent = nullptr;
    if (auto err = lookup(parts, &parent)) return err;
    *is_dir = parts.empty() ? true : parent->kids.at(parts.back()).dir;
    return std::nullopt;
  }

  Node& root() { return root_; }

 private:
  static std::vector<std::string> split(const std::string& path) {
    std::vector<std::string> parts;
    size_t pos = std::string("/castor").size();
    while (pos < path.size()) {
      size_t next = path.find('/', pos + 1);
      if (next == std::string::npos) next = path.size();
      parts.push_back(path.substr(pos + 1, next - pos - 1));
      pos = next;
    }
    return parts;
  }

  std::optional<Errc> walk_dir(const std::vector<std::string>& parts, Node** out) {
    Node* cur = &root_;
    for (const auto& p : parts) {
      if (!cur->dir) return Errc::kNotADirectory;
      auto it = cur->kids.find(p);
      if (it == cur->kids.end()) return Errc::kNotFound;
      cur = &it->second;
    }
    if (!cur->dir) return Errc::kNotADirectory;
    *out = cur;
    return std::nullopt;
  }

  // Resolves the full path; *parent is the directory holding the leaf.
  std::optional<Errc> lookup(const std::vector<std::string>& parts, Node** parent) {
    if (parts.empty()) {
      *parent = nullptr;
      return std::nullopt;
    }
    Node* cur = &root_;
    for (size_t i = 0; i < parts.size(); ++i) {
      if (!cur->dir) return Errc::kNotADirectory;
      auto it = cur->kids.find(parts[i]);
      if (it == cur->kids.end()) return Errc::kNotFound;
      if (i + 1 == parts.size()) *parent = cur;
      cur = &it->second;
    }
    return std::nullopt;
  }

  std::optional<Errc> make(const std::string& path, bool dir) {
    auto parts = split(path);
    if (parts.empty()) return Errc::kExists;
    Node* parent = nullptr;
    if (auto err = walk_dir({parts.begin(), parts.end() - 1}, &parent)) return err;
    if (parent->kids.count(parts.back())) return Errc::kExists;
    Node n;
    n.dir = dir;
    parent->kids.emplace(parts.back(), std::move(n));
    return std::nullopt;
  }

  Node root_;
};

// Random namespace scripts over a small name alphabet so collisions, missing
// parents and cycles all occur often.
struct NsOp {
  enum Kind { kMkdir, kCreate, kUnlink, kRmdir, kRename, kList, kStat } kind;
  std::string a;
  std::string b;
};

inline std::string random_castor_path(std::mt19937_64& rng, const std::string& base, int max_depth) {
  static const char* kNames[] = {"a", "b", "c", "d", "e"};
  std::string p = base;
  const int depth = 1 + static_cast<int>(rng() % static_cast<uint64_t>(max_depth));
  for (int i = 0; i < depth; ++i) p += std::string("/") + kNames[rng() % 5];
  return p;
}

inline NsOp random_ns_op(std::mt19937_64& rng, const std::string& base) {
  NsOp op{};
  const uint64_t r = rng() % 100;
  op.kind = r < 30 ? NsOp::kMkdir : r < 50 ? NsOp::kCreate : r < 60 ? NsOp::kUnlink : r < 70 ? NsOp::kRmdir
          : r < 80 ? NsOp::kRename : r < 90 ? NsOp::kList : NsOp::kStat;
  op.a = random_castor_path(rng, base, 4);
  op.b = random_castor_path(rng, base, 4);
  return op;
}

}  // namespace castor::test
