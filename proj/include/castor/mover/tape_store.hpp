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

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace castor::mover {

struct TapeFileInfo {
  uint32_t fseq = 0;
  uint64_t size = 0;
  uint32_t crc32 = 0;

  bool operator==(const TapeFileInfo&) const = default;
};

// Backing store of simulated cartridges: <root>/<vid>/<fseq, 9 digits> holds
// the payload bytes only (sparse where the data is zero); <root>/<vid>/index
// is a stream of framed JSON records {fseq, size, crc32} or {truncate_from}.
class TapeStore {
 public:
  explicit TapeStore(std::filesystem::path root, bool sync = true);

  std::filesystem::path file_path(const std::string& vid, uint32_t fseq) const;
  std::optional<TapeFileInfo> lookup(const std::string& vid, uint32_t fseq);
  std::vector<TapeFileInfo> files(const std::string& vid);
  uint32_t last_fseq(const std::string& vid);
  // Bytes stored in files before fseq.
  uint64_t bytes_before(const std::string& vid, uint32_t fseq);

  // Writing fseq k drops k and everything after it, as on a real tape.
  // InvalidArgument when k would leave a gap.
  void truncate_from(const std::string& vid, uint32_t fseq);
  void record(const std::string& vid, const TapeFileInfo& info);
  void discard(const std::string& vid);

  const std::filesystem::path& root() const { return root_; }

 private:
  using Index = std::map<uint32_t, TapeFileInfo>;
  Index& index(const std::string& vid);
  void append(const std::string& vid, const std::string& record);

  std::filesystem::path root_;
  bool sync_;
  std::mutex mu_;
  std::map<std::string, Index> cache_;
};

}  // namespace castor::mover
