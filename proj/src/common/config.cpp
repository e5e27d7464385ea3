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

#include "castor/common/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "castor/common/error.hpp"

namespace castor {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad(size_t line, const std::string& why) {
  raise(Errc::kInvalidArgument, "config line " + std::to_string(line) + ": " + why);
}

// Strips a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view s) {
  bool quoted = false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

Config::Scalar parse_scalar(std::string_view raw, size_t line) {
  raw = trim(raw);
  if (raw.empty()) bad(line, "empty value");
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') bad(line, "unterminated string");
    std::string out;
    for (size_t i = 1; i + 1 < raw.size(); ++i) {
      if (raw[i] == '\\' && i + 2 < raw.size()) {
        const char c = raw[++i];
        out.push_back(c == 'n' ? '\n' : c == 't' ? '\t' : c);
      } else {
        out.push_back(raw[i]);
      }
    }
    return out;
  }
  if (raw == "true") return true;
  if (raw == "false") return false;
  std::string digits;
  for (char c : raw) {
    if (c != '_') digits.push_back(c);
  }
  const bool is_float = digits.find_first_of(".eE") != std::string::npos;
  try {
    size_t used = 0;
    if (is_float) {
      const double v = std::stod(digits, &used);
      if (used == digits.size()) return v;
    } else {
      const long long v = std::stoll(digits, &used, 10);
      if (used == digits.size()) return static_cast<int64_t>(v);
    }
  } catch (const std::exception&) {
  }
  bad(line, "cannot parse value '" + std::string(raw) + "'");
}

std::vector<std::string_view> split_array(std::string_view body) {
  std::vector<std::string_view> items;
  bool quoted = false;
  size_t start = 0;
  for (size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '"' && (i == 0 || body[i - 1] != '\\')) quoted = !quoted;
    if (body[i] == ',' && !quoted) {
      items.push_back(body.substr(start, i - start));
      start = i + 1;
    }
  }
  if (!trim(body.substr(start)).empty()) items.push_back(body.substr(start));
  return items;
}

}  // namespace

Config Config::parse(std::string_view text) {
  Config cfg;
  std::string section;
  cfg.sections_[section];
  cfg.order_.push_back(section);
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t eol = std::min(text.find('\n', pos), text.size());
    ++line_no;
    std::string_view line = trim(strip_comment(text.substr(pos, eol - pos)));
    pos = eol + 1;
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') bad(line_no, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) bad(line_no, "empty section name");
      if (!cfg.sections_.count(section)) cfg.order_.push_back(section);
      cfg.sections_[section];
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) bad(line_no, "expected key = value");
    std::string key(trim(line.substr(0, eq)));
    if (key.size() >= 2 && key.front() == '"' && key.back() == '"') key = key.substr(1, key.size() - 2);
    if (key.empty()) bad(line_no, "empty key");
    std::string_view raw = trim(line.substr(eq + 1));
    Value value;
    if (!raw.empty() && raw.front() == '[') {
      if (raw.back() != ']') bad(line_no, "unterminated array");
      value.is_array = true;
      for (auto item : split_array(raw.substr(1, raw.size() - 2))) value.items.push_back(parse_scalar(item, line_no));
    } else {
      value.items.push_back(parse_scalar(raw, line_no));
    }
    cfg.sections_[section][key] = std::move(value);
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::kNotFound, "cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool Config::has(const std::string& section, const std::string& key) const { return find(section, key) != nullptr; }

std::vector<std::string> Config::sections_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& name : order_) {
    if (name.compare(0, prefix.size(), prefix) == 0 && name.size() > prefix.size()) out.push_back(name);
  }
  return out;
}

const Config::Value* Config::find(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

namespace {

[[noreturn]] void missing(const std::string& section, const std::string& key) {
  raise(Errc::kInvalidArgument, "config key [" + section + "] " + key + " missing or mistyped");
}

}  // namespace

std::string Config::get_string(const std::string& section, const std::string& key) const {
  const Value* v = find(section, key);
  if (v == nullptr || v->is_array || !std::holds_alternative<std::string>(v->items.at(0))) missing(section, key);
  return std::get<std::string>(v->items[0]);
}

std::string Config::get_string(const std::string& section, const std::string& key, const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}

int64_t Config::get_int(const std::string& section, const std::string& key) const {
  const Value* v = find(section, key);
  if (v == nullptr || v->is_array || !std::holds_alternative<int64_t>(v->items.at(0))) missing(section, key);
  return std::get<int64_t>(v->items[0]);
}

int64_t Config::get_int(const std::string& section, const std::string& key, int64_t fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
  const Value* v = find(section, key);
  if (v == nullptr || v->is_array) missing(section, key);
  if (std::holds_alternative<double>(v->items.at(0))) return std::get<double>(v->items[0]);
  if (std::holds_alternative<int64_t>(v->items[0])) return static_cast<double>(std::get<int64_t>(v->items[0]));
  missing(section, key);
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  const Value* v = find(section, key);
  if (v == nullptr) return fallback;
  if (v->is_array || !std::holds_alternative<bool>(v->items.at(0))) missing(section, key);
  return std::get<bool>(v->items[0]);
}

std::vector<std::string> Config::get_strings(const std::string& section, const std::string& key) const {
  const Value* v = find(section, key);
  if (v == nullptr) return {};
  std::vector<std::string> out;
  for (const auto& item : v->items) {
    if (!std::holds_alternative<std::string>(item)) missing(section, key);
    out.push_back(std::get<std::string>(item));
  }
  return out;
}

void Config::set(const std::string& section, const std::string& key, Scalar value) {
  if (!sections_.count(section)) order_.push_back(section);
  Value v;
  v.items.push_back(std::move(value));
  sections_[section][key] = std::move(v);
}

}  // namespace castor
