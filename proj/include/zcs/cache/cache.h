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
#include <list>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "zcs/zstorage/zone_storage.h"

namespace zcs::cache {

using Key = std::uint64_t;

enum class Policy { kFifo, kLru, kZlru };

const char* policy_name(Policy p);

struct CacheConfig {
  std::uint64_t region_size = 16 * zns::kMiB;
  std::uint32_t cache_capacity_regions = 0;
  // Share of the eviction list kept in the vOP partition (ZLRU only).
  double vop_ratio = 1.0;
  Policy policy = Policy::kZlru;
  bool zlru_reorder = true;
  // Items start on multiples of this within a region.
  std::uint64_t item_alignment = zns::kPageSize;

  void validate() const;
};

enum class RegionStatus : std::uint8_t { kFree, kBuffered, kFlushed, kEvicting, kEvicted };

const char* region_status_name(RegionStatus s);

// Where flushed regions live. Slot i is the cache's i-th virtual region.
class RegionDevice {
 public:
  virtual ~RegionDevice() = default;
  virtual void write_region(std::uint32_t slot, std::span<const std::byte> data) = 0;
  virtual void read(std::uint32_t slot, std::uint64_t offset, std::span<std::byte> out) = 0;
  // Called once the cache has evicted the slot's contents.
  virtual void invalidate_region(std::uint32_t slot) = 0;
  // Zone currently holding the slot, if the backend is zoned and it is mapped.
  virtual std::optional<std::uint32_t> zone_of(std::uint32_t slot) const = 0;
};

struct CacheStats {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t inserted_bytes = 0;
  std::uint64_t evicted_regions = 0;
  std::uint64_t dropped_regions = 0;
  std::uint64_t flushed_regions = 0;
  std::uint64_t reordered_regions = 0;
};

struct ItemLocation {
  std::uint32_t region = 0;
  std::uint64_t offset = 0;
  std::uint64_t size = 0;
};

// Log-structured region cache. Items are packed into a single buffered
// region which is flushed whole; flushed regions sit on a recency list split
// into a main partition and a vOP partition. Eviction works on whole regions.
//
// Mutations are serialized by one mutex. Flushes and evictions drop it while
// the backend does I/O; the region status tells GC what is in flight.
class Cache {
 public:
  Cache(CacheConfig config, RegionDevice& backend);

  Cache(const Cache&) = delete;
  Cache& operator=(const Cache&) = delete;

  const CacheConfig& config() const { return config_; }

  void insert(Key key, std::span<const std::byte> value);
  std::optional<std::vector<std::byte>> lookup(Key key);

  // Top-down eviction of one flushed region; returns its slot.
  std::uint32_t evict_one();

  // Sinks vOP regions of candidate zones to the vOP tail. Returns how many
  // regions were in the moved set.
  std::size_t zlru_reorder();

  // GC callback for the region at `virtual_address` inside `victim_zone`.
  zstorage::DropDecision zdrop_filter(std::uint64_t virtual_address, std::uint32_t victim_zone);

  // Flushes a partially filled buffer, if any.
  void flush();

  CacheStats stats() const;

  // Introspection, mainly for tests.
  RegionStatus region_status(std::uint32_t slot) const;
  std::vector<std::uint32_t> main_partition() const;
  std::vector<std::uint32_t> vop_partition() const;
  std::optional<ItemLocation> location_of(Key key) const;
  std::vector<Key> indexed_keys() const;
  std::size_t main_capacity() const { return main_cap_; }
  // Zones whose main-partition region count is below the average.
  std::vector<std::uint32_t> candidate_zones() const;

  // Index/list/status agreement; throws on violation.
  void check_consistency() const;

 private:
  enum class Part : std::uint8_t { kNone, kMain, kVop };

  struct Region {
    RegionStatus status = RegionStatus::kFree;
    Part part = Part::kNone;
    std::list<std::uint32_t>::iterator pos;
    std::vector<Key> keys;
  };

  using Lock = std::unique_lock<std::mutex>;

  void allocate_buffer_locked(Lock& lk);
  void flush_locked(Lock& lk);
  std::uint32_t evict_one_locked(Lock& lk);
  void drop_index_locked(std::uint32_t slot);
  void unlink_locked(std::uint32_t slot);
  void push_main_head_locked(std::uint32_t slot);
  void rebalance_locked();
  std::size_t zlru_reorder_locked();
  std::vector<std::uint32_t> candidate_zones_locked() const;
  bool partitioned() const { return config_.policy == Policy::kZlru; }

  CacheConfig config_;
  RegionDevice& backend_;
  std::size_t main_cap_;

  mutable std::mutex mu_;
  std::vector<Region> regions_;
  std::list<std::uint32_t> main_;
  std::list<std::uint32_t> vop_;
  std::unordered_map<Key, ItemLocation> index_;

  std::optional<std::uint32_t> buffer_slot_;
  std::uint64_t buffer_offset_ = 0;
  std::vector<std::byte> buffer_;

  CacheStats stats_;
};

}  // namespace zcs::cache
