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

#include "castor/common/error.hpp"

#include <array>
#include <cerrno>
#include <cstring>
#include <utility>

namespace castor {
namespace {

constexpr std::array<std::pair<Errc, std::string_view>, 35> kNames{{
    {Errc::kInvalidArgument, "InvalidArgument"},
    {Errc::kMalformedPath, "MalformedPath"},
    {Errc::kUnknownRoute, "UnknownRoute"},
    {Errc::kNotFound, "NotFound"},
    {Errc::kExists, "Exists"},
    {Errc::kNotADirectory, "NotADirectory"},
    {Errc::kIsADirectory, "IsADirectory"},
    {Errc::kNotEmpty, "NotEmpty"},
    {Errc::kCycleError, "CycleError"},
    {Errc::kDuplicateTapeLocation, "DuplicateTapeLocation"},
    {Errc::kSizeMismatch, "SizeMismatch"},
    {Errc::kNoEligibleVolume, "NoEligibleVolume"},
    {Errc::kUnderflow, "Underflow"},
    {Errc::kUnknownModel, "UnknownModel"},
    {Errc::kIllegalTransition, "IllegalTransition"},
    {Errc::kNotAssigned, "NotAssigned"},
    {Errc::kChecksumMismatch, "ChecksumMismatch"},
    {Errc::kNoSuchFseq, "NoSuchFseq"},
    {Errc::kVolumeFull, "VolumeFull"},
    {Errc::kSourceTruncated, "SourceTruncated"},
    {Errc::kSinkError, "SinkError"},
    {Errc::kAlreadyMounted, "AlreadyMounted"},
    {Errc::kNotMounted, "NotMounted"},
    {Errc::kNoSpace, "NoSpace"},
    {Errc::kNotOpenForWrite, "NotOpenForWrite"},
    {Errc::kNoTapeCopy, "NoTapeCopy"},
    {Errc::kRecallFailed, "RecallFailed"},
    {Errc::kBadHandle, "BadHandle"},
    {Errc::kIoError, "IoError"},
    {Errc::kNegativePosition, "NegativePosition"},
    {Errc::kBusy, "Busy"},
    {Errc::kSpecInvalid, "SpecInvalid"},
    {Errc::kEnvironmentDown, "EnvironmentDown"},
    {Errc::kProtocolError, "ProtocolError"},
    {Errc::kInternal, "Internal"},
}};

}  // namespace

std::string_view errc_name(Errc code) {
  for (const auto& [c, name] : kNames) {
    if (c == code) return name;
  }
  return "Internal";
}

Errc errc_from_name(std::string_view name) {
  for (const auto& [c, n] : kNames) {
    if (n == name) return c;
  }
  return Errc::kInternal;
}

bool is_user_error(Errc code) {
  switch (code) {
    case Errc::kIoError:
    case Errc::kEnvironmentDown:
    case Errc::kProtocolError:
    case Errc::kInternal:
    case Errc::kVolumeFull:
    case Errc::kSinkError:
      return false;
    default:
      return true;
  }
}

void raise_errno(const std::string& what) {
  const int saved = errno;
  throw CastorError(Errc::kIoError, what + ": " + std::strerror(saved));
}

}  // namespace castor
