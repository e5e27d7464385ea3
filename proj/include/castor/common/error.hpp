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

#include <stdexcept>
#include <string>
#include <string_view>

namespace castor {

// Error codes travel on the wire by name, so the enumerator spelling is part of
// the protocol.
enum class Errc {
  kInvalidArgument,
  kMalformedPath,
  kUnknownRoute,
  kNotFound,
  kExists,
  kNotADirectory,
  kIsADirectory,
  kNotEmpty,
  kCycleError,
  kDuplicateTapeLocation,
  kSizeMismatch,
  kNoEligibleVolume,
  kUnderflow,
  kUnknownModel,
  kIllegalTransition,
  kNotAssigned,
  kChecksumMismatch,
  kNoSuchFseq,
  kVolumeFull,
  kSourceTruncated,
  kSinkError,
  kAlreadyMounted,
  kNotMounted,
  kNoSpace,
  kNotOpenForWrite,
  kNoTapeCopy,
  kRecallFailed,
  kBadHandle,
  kIoError,
  kNegativePosition,
  kBusy,
  kSpecInvalid,
  kEnvironmentDown,
  kProtocolError,
  kInternal,
};

std::string_view errc_name(Errc code);
Errc errc_from_name(std::string_view name);

// User errors map to CLI exit code 1, everything else to 2.
bool is_user_error(Errc code);

class CastorError : public std::runtime_error {
 public:
  CastorError(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw CastorError(code, message);
}

// Throws kIoError carrying strerror(errno).
[[noreturn]] void raise_errno(const std::string& what);

}  // namespace castor
