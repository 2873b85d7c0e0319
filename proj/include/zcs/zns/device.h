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

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <vector>

#include "zcs/page_store.h"

namespace zcs::zns {

inline constexpr std::uint64_t kMiB = 1024 * 1024;
inline constexpr std::uint64_t kPageSize = 4096;

enum class ZoneState { kEmpty, kOpen, kFull };

const char* zone_state_name(ZoneState state);

struct DeviceConfig {
  std::uint32_t zone_count = 64;
  std::uint64_t zone_capacity = 64 * kMiB;
  std::uint32_t max_open_zones = 14;
  // Timing model only; the device itself never sleeps.
  std::uint64_t read_bandwidth = 3000 * kMiB;
  std::uint64_t write_bandwidth = 1000 * kMiB;

  // Throws Error(kInvalidConfig) naming the first violated constraint.
  void validate() const;
  std::uint64_t capacity_bytes() const { return zone_capacity * zone_count; }
};

struct ZoneInfo {
  std::uint32_t id = 0;
  ZoneState state = ZoneState::kEmpty;
  std::uint64_t write_pointer = 0;
  std::uint64_t reset_count = 0;
};

struct DeviceCounters {
  std::uint64_t total_appended_bytes = 0;
  std::uint64_t total_read_bytes = 0;
  std::uint64_t total_resets = 0;
  std::uint32_t open_zone_count = 0;
};

struct DeviceReport {
  std::vector<ZoneInfo> zones;
  DeviceCounters counters;
};

// In-memory zoned namespace device. Zones are append-only at their write
// pointer and are reclaimed only by a whole-zone reset. The first append to
// an Empty zone opens it implicitly; a zone that fills (or is finished)
// becomes Full and gives back its open slot.
//
// Thread safety: appends to different zones run in parallel; a second
// append racing on the same zone fails with kZoneBusy. Reads share the zone
// with each other and with appends. Reset needs the zone exclusively and
// fails with kZoneBusy while a reader is registered.
class Device {
 public:
  explicit Device(DeviceConfig config);

  Device(const Device&) = delete;
  Device& operator=(const Device&) = delete;

  const DeviceConfig& config() const { return config_; }

  // Returns the device-global physical address of the first appended byte.
  std::uint64_t append(std::uint32_t zone_id, std::span<const std::byte> payload);

  std::vector<std::byte> read(std::uint64_t physical_address, std::uint64_t length) const;
  void read_into(std::uint64_t physical_address, std::span<std::byte> out) const;

  void reset(std::uint32_t zone_id);
  void finish(std::uint32_t zone_id);

  DeviceReport report() const;

  ZoneState state(std::uint32_t zone_id) const;
  std::uint64_t write_pointer(std::uint32_t zone_id) const;
  std::uint64_t remaining(std::uint32_t zone_id) const;
  std::uint32_t zone_of(std::uint64_t physical_address) const {
    return static_cast<std::uint32_t>(physical_address / config_.zone_capacity);
  }
  std::uint64_t zone_start(std::uint32_t zone_id) const {
    return static_cast<std::uint64_t>(zone_id) * config_.zone_capacity;
  }

  std::uint64_t total_appended_bytes() const { return appended_.load(); }
  std::uint64_t total_read_bytes() const { return read_bytes_.load(); }
  std::uint32_t open_zone_count() const;
  std::size_t raw_page_count() const;

  // Shared registration on a zone. While any lease is alive, reset() on that
  // zone fails with kZoneBusy.
  class ReaderLease {
   public:
    ReaderLease() = default;
    explicit operator bool() const { return lock_.owns_lock(); }

   private:
    friend class Device;
    explicit ReaderLease(std::shared_mutex& gate) : lock_(gate) {}
    std::shared_lock<std::shared_mutex> lock_;
  };

  ReaderLease acquire_reader(std::uint32_t zone_id) const;

 private:
  struct Zone {
    // Held shared by reader leases, exclusively by reset.
    mutable std::shared_mutex gate;
    // Guards state, write pointer and page contents.
    mutable std::shared_mutex data;
    std::atomic<bool> appending{false};
    ZoneState state = ZoneState::kEmpty;
    std::uint64_t write_pointer = 0;
    std::uint64_t reset_count = 0;
    // Allocated by the first append after a reset, so idle zones cost nothing.
    std::optional<PageStore> pages;
  };

  Zone& zone(std::uint32_t zone_id) const;
  void release_open_slot();

  DeviceConfig config_;
  std::vector<std::unique_ptr<Zone>> zones_;
  mutable std::mutex open_mu_;
  std::uint32_t open_zones_ = 0;
  std::atomic<std::uint64_t> appended_{0};
  mutable std::atomic<std::uint64_t> read_bytes_{0};
  std::atomic<std::uint64_t> resets_{0};
};

}  // namespace zcs::zns
