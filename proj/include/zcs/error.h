// Copyright 2026-present the zcsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace zcs {

enum class Errc {
  kInvalidConfig,
  kZoneFull,
  kMaxOpenZonesExceeded,
  kZoneNotWritable,
  kReadBeyondWritePointer,
  kCrossZoneRead,
  kZoneBusy,
  kZoneNotOpen,
  kOutOfRange,
  kMisaligned,
  kUnmapped,
  kDeviceBusy,
  kNoWritableZone,
  kSizeMismatch,
  kUnmappedRegion,
  kNoVictimAvailable,
  kGcStalled,
  kInfeasibleRates,
  kItemTooLarge,
  kNothingToEvict,
  kIncompatibleSpec,
  kInvalidSpec,
  kParseError,
  kConfigError,
  kIoError,
};

const char* errc_name(Errc code);

// Every failure in the library surfaces as an Error carrying a stable code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace zcs
