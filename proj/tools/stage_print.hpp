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

#include <iostream>
#include <spdlog/fmt/fmt.h>

#include "castor/stager/types.hpp"

namespace castor::tools {

// One line: file_id server path, plus PENDING while a recall runs.
inline void print_location(const stager::Location& l) {
  std::cout << fmt::format("{} {} {}{}\n", l.file_id, l.server, l.path, l.pending ? " PENDING" : "");
}

}  // namespace castor::tools
