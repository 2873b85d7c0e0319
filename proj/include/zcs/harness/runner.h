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
#include <functional>
#include <string>
#include <vector>

#include "zcs/harness/config.h"
#include "zcs/schemes/engine.h"
#include "zcs/workload/workload.h"

namespace zcs::harness {

enum class Stage { kFilling, kEvicting, kStable };

const char* stage_name(Stage s);

// Serial bandwidth budget: every flash byte moved costs time, and foreground
// writes and GC copies draw on the same write budget.
class SimClock {
 public:
  SimClock(std::uint64_t read_bandwidth, std::uint64_t write_bandwidth);
  // Returns the seconds charged.
  double charge(std::uint64_t write_bytes, std::uint64_t read_bytes);
  double seconds() const { return seconds_; }

 private:
  double read_bw_;
  double write_bw_;
  double seconds_ = 0;
};

struct IntervalRow {
  std::uint64_t interval = 0;
  std::uint64_t ops = 0;  // cumulative
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  double hit_ratio = 0;
  std::uint64_t cache_bytes = 0;
  std::uint64_t device_bytes = 0;
  double wa_cum = 1.0;
  std::uint64_t gc_migrated_bytes = 0;
  std::uint32_t empty_zones = 0;
  Stage stage = Stage::kFilling;
};

struct Summary {
  std::string scheme;
  std::string workload;
  std::uint64_t ops = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t stable_ops = 0;
  std::uint64_t stable_hits = 0;
  std::uint64_t stable_misses = 0;
  double stable_hit_ratio = 0;
  double stable_seconds = 0;
  // Stable ops per simulated second; 0 without timing or a stable stage.
  double stable_throughput = 0;
  double sim_seconds = 0;
  double final_wa = 1.0;
  std::uint64_t cache_bytes = 0;
  std::uint64_t device_bytes = 0;
  std::uint64_t gc_migrated_bytes = 0;
  std::uint64_t gc_cycles = 0;
  std::uint64_t zone_resets = 0;
  std::uint64_t evicted_regions = 0;
  std::uint64_t dropped_regions = 0;
  // Op index where each stage began; UINT64_MAX if never reached.
  std::uint64_t evicting_from = UINT64_MAX;
  std::uint64_t stable_from = UINT64_MAX;
  std::uint64_t verified_hits = 0;
  std::uint64_t verified_items = 0;
  std::uint64_t corruptions = 0;
};

struct MetricsReport {
  std::vector<IntervalRow> rows;
  Summary summary;

  std::string to_csv() const;
};

struct RunHooks {
  zstorage::GcObserver gc_observer;
  std::function<void(std::uint64_t index, const workload::CacheOp& op, bool hit)> on_op;
  // Called with the engine after the op stream ends, before final checks.
  std::function<void(schemes::Engine& engine)> on_finish;
};

extern const char* const kCsvHeader;

MetricsReport run(const ExperimentConfig& config, const RunHooks& hooks = {});
// Same loop over a prepared op list.
MetricsReport run_ops(const ExperimentConfig& config, const std::vector<workload::CacheOp>& ops,
                      const RunHooks& hooks = {});

// Drives `ops` through `engine` with miss fills and returns simulated seconds.
double simulate_time(schemes::Engine& engine, const std::vector<workload::CacheOp>& ops);

}  // namespace zcs::harness
