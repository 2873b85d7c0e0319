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

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <string_view>

#include "zcs/schemes/engine.h"
#include "zcs/workload/workload.h"

namespace zcs::harness {

struct ExperimentConfig {
  schemes::SchemeSpec scheme;
  workload::WorkloadSpec workload;
  // Replay this trace instead of generating ops.
  std::string trace_path;
  std::uint64_t interval_ops = 10000;
  bool timing_enabled = true;
  // CSV destination; empty writes nothing.
  std::string output_path;
  // Check every hit and, at the end, every cached item against its payload.
  bool verify_payloads = true;

  void validate() const;
};

// Flat `key = value` settings. Workload keys override the preset named by
// `workload`, whose key space and op count scale with the cache size.
using Settings = std::map<std::string, std::string, std::less<>>;

Settings parse_settings(std::istream& in, const std::string& source);
ExperimentConfig config_from_settings(const Settings& settings);
// Reads and validates a config file; failures throw kConfigError naming `path`.
ExperimentConfig load_config(const std::string& path);

// "16M", "64MiB", "4096", "1G" -> bytes.
std::uint64_t parse_bytes(std::string_view text);

}  // namespace zcs::harness
