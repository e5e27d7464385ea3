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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace castor {

// TOML-style key/value configuration: "[section]" headers, "key = value" lines,
// '#' comments. Values are double-quoted strings, integers (underscores
// allowed), floats, true/false, or flat arrays of those. Keys before the first
// header live in section "".
class Config {
 public:
  using Scalar = std::variant<std::string, int64_t, double, bool>;
  struct Value {
    std::vector<Scalar> items;  // one item unless the value was an array
    bool is_array = false;
  };
  using Section = std::map<std::string, Value>;

  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  bool has_section(const std::string& name) const { return sections_.count(name) != 0; }
  bool has(const std::string& section, const std::string& key) const;
  // Section names starting with `prefix`, in file order.
  std::vector<std::string> sections_with_prefix(const std::string& prefix) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  int64_t get_int(const std::string& section, const std::string& key) const;
  int64_t get_int(const std::string& section, const std::string& key, int64_t fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<std::string> get_strings(const std::string& section, const std::string& key) const;

  void set(const std::string& section, const std::string& key, Scalar value);

 private:
  const Value* find(const std::string& section, const std::string& key) const;

  std::map<std::string, Section> sections_;
  std::vector<std::string> order_;
};

}  // namespace castor
