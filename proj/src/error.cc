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

#include "zcs/error.h"

namespace zcs {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::kInvalidConfig: return "InvalidConfig";
    case Errc::kZoneFull: return "ZoneFull";
    case Errc::kMaxOpenZonesExceeded: return "MaxOpenZonesExceeded";
    case Errc::kZoneNotWritable: return "ZoneNotWritable";
    case Errc::kReadBeyondWritePointer: return "ReadBeyondWritePointer";
    case Errc::kCrossZoneRead: return "CrossZoneRead";
    case Errc::kZoneBusy: return "ZoneBusy";
    case Errc::kZoneNotOpen: return "ZoneNotOpen";
    case Errc::kOutOfRange: return "OutOfRange";
    case Errc::kMisaligned: return "Misaligned";
    case Errc::kUnmapped: return "Unmapped";
    case Errc::kDeviceBusy: return "DeviceBusy";
    case Errc::kNoWritableZone: return "NoWritableZone";
    case Errc::kSizeMismatch: return "SizeMismatch";
    case Errc::kUnmappedRegion: return "UnmappedRegion";
    case Errc::kNoVictimAvailable: return "NoVictimAvailable";
    case Errc::kGcStalled: return "GcStalled";
    case Errc::kInfeasibleRates: return "InfeasibleRates";
    case Errc::kItemTooLarge: return "ItemTooLarge";
    case Errc::kNothingToEvict: return "NothingToEvict";
    case Errc::kIncompatibleSpec: return "IncompatibleSpec";
    case Errc::kInvalidSpec: return "InvalidSpec";
    case Errc::kParseError: return "ParseError";
    case Errc::kConfigError: return "ConfigError";
    case Errc::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace zcs
