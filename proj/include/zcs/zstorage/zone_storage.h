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

#include <condition_variable>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <thread>
#include <vector>

#include "zcs/zns/device.h"
#include "zcs/zstorage/zmap.h"

namespace zcs::zstorage {

struct StorageConfig {
  std::uint64_t region_size = 16 * zns::kMiB;
  // Soft limit: foreground writes open Empty zones until this many are open.
  std::uint32_t min_write_zones = 4;
  // Hard limit; 0 selects min(8, device max_open_zones).
  std::uint32_t max_write_zones = 0;
  // Watermarks as percentages of the provisioned zone count.
  double w_low = 1.0;
  double w_high = 3.0;
  bool gc_enabled = true;
  // Reset a read zone the moment its last valid region goes away. Used when
  // regions are zone sized and eviction alone reclaims space.
  bool reset_when_invalid = false;
};

enum class ZoneGroup : std::uint8_t { kEmpty, kWrite, kRead, kCleaning };

const char* zone_group_name(ZoneGroup group);

// What GC does with one valid region of its victim zone.
enum class DropDecision {
  kMigrate,  // copy to a write zone and remap
  kDrop,     // discard; the cache has evicted it
  kSkip,     // stale or already evicted; leave the map alone
  kWait,     // an eviction is in flight; ask again once it completes
};

const char* drop_decision_name(DropDecision d);

using DropFilter = std::function<DropDecision(std::uint64_t virtual_address, std::uint32_t zone)>;

struct GcStats {
  std::uint64_t zones_reclaimed = 0;
  std::uint64_t migrated_bytes = 0;
  std::uint64_t migrated_regions = 0;
  std::uint64_t dropped_regions = 0;
  std::uint64_t skipped_regions = 0;
  std::uint64_t waits = 0;
  // Mappings still inside a victim after every region was classified.
  std::uint64_t orphaned_regions = 0;
  std::uint32_t empty_before = 0;
  std::uint32_t empty_after = 0;
  // Sums over victims; their ratio is the observed victim-invalidity skew.
  double victim_invalid_ratio_sum = 0;
  double mean_invalid_ratio_sum = 0;

  GcStats& operator+=(const GcStats& o);
};

struct GcEvent {
  enum class Kind { kEnter, kVictim, kExit };
  Kind kind = Kind::kEnter;
  std::uint32_t empty_zones = 0;
  std::uint32_t zone = 0;
  std::uint64_t victim_valid_bytes = 0;
  // Smallest valid byte count among the other read zones (UINT64_MAX if none).
  std::uint64_t min_other_valid_bytes = 0;
};

using GcObserver = std::function<void(const GcEvent&)>;

struct StorageCounters {
  std::uint64_t region_bytes_written = 0;
  std::uint64_t gc_migrated_bytes = 0;
  std::uint64_t gc_read_bytes = 0;
  std::uint64_t gc_cycles = 0;
  std::uint64_t zones_reclaimed = 0;
  std::uint64_t dropped_regions = 0;
  std::uint64_t eager_resets = 0;
  double victim_invalid_ratio_sum = 0;
  double mean_invalid_ratio_sum = 0;
};

struct ZoneGroupsSnapshot {
  std::vector<std::uint32_t> empty_set;
  std::vector<std::uint32_t> write_set;
  std::vector<std::uint32_t> read_set;
};

// Region-granular storage engine over a zoned device. Regions are appended
// to write zones (round-robin), tracked by a ZMap, and reclaimed by
// watermark-driven GC that asks a DropFilter what to do with each valid
// region of the victim zone.
//
// Lock order: state -> map -> device zone. Data is appended before its
// mapping is published. One GC cycle runs at a time.
class ZoneStorage {
 public:
  ZoneStorage(zns::Device& device, StorageConfig config);
  ~ZoneStorage();

  ZoneStorage(const ZoneStorage&) = delete;
  ZoneStorage& operator=(const ZoneStorage&) = delete;

  const StorageConfig& config() const { return config_; }
  zns::Device& device() { return device_; }
  const zns::Device& device() const { return device_; }
  std::uint32_t provisioned_zones() const { return device_.config().zone_count; }
  std::uint32_t regions_per_zone() const {
    return static_cast<std::uint32_t>(device_.config().zone_capacity / config_.region_size);
  }

  std::uint64_t write_region(std::uint64_t virtual_address, std::span<const std::byte> payload);
  std::vector<std::byte> read_region(std::uint64_t virtual_address) const;
  void read_region_into(std::uint64_t virtual_address, std::uint64_t offset,
                        std::span<std::byte> out) const;
  void invalidate_region(std::uint64_t virtual_address);

  std::uint32_t select_victim() const;

  // GC entry condition: empty zones below the low watermark.
  bool gc_needed() const;
  std::uint32_t trigger_threshold() const { return trigger_threshold_; }
  std::uint32_t stop_threshold() const { return stop_threshold_; }

  // Reclaims victims until the empty set reaches the high watermark. Returns
  // zeroed stats without entering when gc_needed() is false.
  GcStats gc_cycle(const DropFilter& filter);

  // Runs a GC cycle on a background thread whenever gc_needed() turns true.
  // While it runs, foreground writes wait for space instead of failing, and
  // both watermarks move up by one zone that only GC may open.
  void start_background_gc(DropFilter filter);
  void stop_background_gc();

  void set_gc_observer(GcObserver observer);

  std::optional<std::uint64_t> physical_of(std::uint64_t virtual_address) const;
  std::optional<std::uint32_t> zone_of_region(std::uint64_t virtual_address) const;
  std::uint64_t zone_valid_bytes(std::uint32_t zone) const;
  std::uint32_t zone_valid_regions(std::uint32_t zone) const;
  ZoneGroup zone_group(std::uint32_t zone) const;
  std::uint32_t empty_zone_count() const;
  ZoneGroupsSnapshot groups() const;
  std::map<std::uint64_t, std::uint64_t> forward_map() const;
  StorageCounters counters() const;

  // Validates zMap bijectivity, group partition and limits; throws on error.
  void check_consistency() const;

 private:
  struct ZoneSlot {
    ZoneGroup group = ZoneGroup::kEmpty;
    bool busy = false;
    // Opened by GC during the current cycle; foreground writes stay out.
    bool gc_owned = false;
    std::uint64_t reserved = 0;
  };

  std::optional<std::uint32_t> pick_write_zone_locked(bool for_gc);
  std::uint32_t acquire_write_zone(bool for_gc);
  void release_write_zone(std::uint32_t zone);
  void open_zone_locked(std::uint32_t zone);
  void maybe_eager_reset(std::uint32_t zone);
  void reset_zone_blocking(std::uint32_t zone);
  std::uint32_t select_victim_locked() const;
  std::uint32_t reserve_locked() const { return bg_running_ ? 1 : 0; }
  void release_gc_zones_locked() {
    for (ZoneSlot& z : zones_) z.gc_owned = false;
  }
  void notify(const GcEvent& e);
  void background_loop(DropFilter filter);

  zns::Device& device_;
  StorageConfig config_;
  std::uint32_t trigger_threshold_;
  std::uint32_t stop_threshold_;

  mutable std::mutex state_mu_;
  std::condition_variable space_cv_;
  std::vector<ZoneSlot> zones_;
  std::vector<std::uint32_t> write_order_;
  std::size_t rr_cursor_ = 0;
  std::uint32_t empty_count_ = 0;
  std::uint32_t write_count_ = 0;

  mutable std::shared_mutex map_mu_;
  ZMap map_;

  std::mutex gc_mu_;
  GcObserver observer_;
  StorageCounters counters_;

  std::mutex bg_mu_;
  std::condition_variable bg_cv_;
  std::thread bg_thread_;
  bool bg_running_ = false;
  bool bg_stop_ = false;
  std::exception_ptr bg_error_;
};

}  // namespace zcs::zstorage
