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

#include "zcs/zstorage/zone_storage.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "zcs/error.h"
#include "zcs/simd/kernels.h"

namespace zcs::zstorage {

namespace {

constexpr std::uint64_t kNotCandidate = std::uint64_t{1} << 62;

std::uint32_t percent_of(double percent, std::uint32_t zones) {
  // The epsilon keeps exact products such as 3% of 100 from rounding up.
  return static_cast<std::uint32_t>(std::ceil(percent * zones / 100.0 - 1e-9));
}

}  // namespace

const char* zone_group_name(ZoneGroup group) {
  switch (group) {
    case ZoneGroup::kEmpty: return "empty";
    case ZoneGroup::kWrite: return "write";
    case ZoneGroup::kRead: return "read";
    case ZoneGroup::kCleaning: return "cleaning";
  }
  return "unknown";
}

const char* drop_decision_name(DropDecision d) {
  switch (d) {
    case DropDecision::kMigrate: return "migrate";
    case DropDecision::kDrop: return "drop";
    case DropDecision::kSkip: return "skip";
    case DropDecision::kWait: return "wait";
  }
  return "unknown";
}

GcStats& GcStats::operator+=(const GcStats& o) {
  zones_reclaimed += o.zones_reclaimed;
  migrated_bytes += o.migrated_bytes;
  migrated_regions += o.migrated_regions;
  dropped_regions += o.dropped_regions;
  skipped_regions += o.skipped_regions;
  waits += o.waits;
  orphaned_regions += o.orphaned_regions;
  empty_after = o.empty_after;
  victim_invalid_ratio_sum += o.victim_invalid_ratio_sum;
  mean_invalid_ratio_sum += o.mean_invalid_ratio_sum;
  return *this;
}

ZoneStorage::ZoneStorage(zns::Device& device, StorageConfig config)
    : device_(device),
      config_(config),
      trigger_threshold_(0),
      stop_threshold_(0),
      zones_(device.config().zone_count),
      empty_count_(device.config().zone_count),
      map_(device.config().zone_count, device.config().zone_capacity,
           config.region_size == 0 ? 1 : config.region_size) {
  const auto& dc = device_.config();
  if (config_.region_size == 0 || config_.region_size > dc.zone_capacity ||
      dc.zone_capacity % config_.region_size != 0) {
    throw Error(Errc::kInvalidConfig, "zone capacity " + std::to_string(dc.zone_capacity) +
                                          " is not a multiple of region size " +
                                          std::to_string(config_.region_size));
  }
  if (config_.max_write_zones == 0) {
    config_.max_write_zones = std::min<std::uint32_t>(8, dc.max_open_zones);
  }
  if (config_.max_write_zones > dc.max_open_zones) {
    throw Error(Errc::kInvalidConfig, "max_write_zones exceeds the device open-zone limit");
  }
  if (config_.min_write_zones < 1 || config_.min_write_zones > config_.max_write_zones) {
    throw Error(Errc::kInvalidConfig, "min_write_zones must be in [1, max_write_zones]");
  }
  if (!(config_.w_low > 0) || !(config_.w_low < config_.w_high) || config_.w_high > 100) {
    throw Error(Errc::kInvalidConfig, "watermarks must satisfy 0 < w_low < w_high <= 100");
  }
  trigger_threshold_ = percent_of(config_.w_low, dc.zone_count);
  stop_threshold_ = percent_of(config_.w_high, dc.zone_count);
}

ZoneStorage::~ZoneStorage() {
  try {
    stop_background_gc();
  } catch (...) {
  }
}

void ZoneStorage::open_zone_locked(std::uint32_t zone) {
  zones_[zone].group = ZoneGroup::kWrite;
  zones_[zone].reserved = 0;
  --empty_count_;
  ++write_count_;
  write_order_.push_back(zone);
}

std::optional<std::uint32_t> ZoneStorage::pick_write_zone_locked(bool for_gc) {
  auto lowest_empty = [&]() -> std::optional<std::uint32_t> {
    for (std::uint32_t z = 0; z < zones_.size(); ++z) {
      if (zones_[z].group == ZoneGroup::kEmpty) {
        return z;
      }
    }
    return std::nullopt;
  };
  // With a background collector the last empty zone is kept for migrations.
  const std::uint32_t keep = for_gc ? 0 : reserve_locked();
  const bool can_open = empty_count_ > keep && write_count_ < config_.max_write_zones;
  if (!for_gc && can_open && write_count_ < config_.min_write_zones) {
    const std::uint32_t z = *lowest_empty();
    open_zone_locked(z);
    rr_cursor_ = 0;
    return z;
  }
  const std::uint64_t capacity = device_.config().zone_capacity;
  auto has_room = [&](std::uint32_t z) {
    return !zones_[z].busy && capacity - zones_[z].reserved >= config_.region_size;
  };
  if (for_gc) {
    for (std::uint32_t z : write_order_) {
      if (zones_[z].gc_owned && has_room(z)) {
        return z;
      }
    }
  }
  const std::size_t n = write_order_.size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t idx = (rr_cursor_ + k) % n;
    const std::uint32_t z = write_order_[idx];
    if (has_room(z) && (for_gc || !zones_[z].gc_owned)) {
      rr_cursor_ = (idx + 1) % n;
      return z;
    }
  }
  if (can_open) {
    const std::uint32_t z = *lowest_empty();
    open_zone_locked(z);
    zones_[z].gc_owned = for_gc;
    rr_cursor_ = 0;
    return z;
  }
  return std::nullopt;
}

std::uint32_t ZoneStorage::acquire_write_zone(bool for_gc) {
  std::unique_lock lk(state_mu_);
  for (;;) {
    if (auto z = pick_write_zone_locked(for_gc)) {
      zones_[*z].busy = true;
      zones_[*z].reserved += config_.region_size;
      return *z;
    }
    const bool writer_in_flight = std::any_of(write_order_.begin(), write_order_.end(),
                                              [&](std::uint32_t z) { return zones_[z].busy; });
    const bool gc_can_help = !for_gc && bg_running_ && !bg_error_;
    if (!writer_in_flight && !gc_can_help) {
      if (for_gc) {
        throw Error(Errc::kGcStalled, "no write zone has room for a migrated region");
      }
      throw Error(Errc::kNoWritableZone,
                  "all zones are full; " + std::to_string(empty_count_) + " empty, " +
                      std::to_string(write_count_) + " open for writing");
    }
    if (gc_can_help) {
      bg_cv_.notify_one();
    }
    space_cv_.wait_for(lk, std::chrono::milliseconds(5));
  }
}

void ZoneStorage::release_write_zone(std::uint32_t zone) {
  {
    std::lock_guard lk(state_mu_);
    ZoneSlot& slot = zones_[zone];
    slot.busy = false;
    if (slot.reserved == device_.config().zone_capacity) {
      auto it = std::find(write_order_.begin(), write_order_.end(), zone);
      const auto idx = static_cast<std::size_t>(it - write_order_.begin());
      write_order_.erase(it);
      if (idx < rr_cursor_) {
        --rr_cursor_;
      }
      if (rr_cursor_ >= write_order_.size()) {
        rr_cursor_ = 0;
      }
      --write_count_;
      slot.group = ZoneGroup::kRead;
    }
  }
  space_cv_.notify_all();
}

std::uint64_t ZoneStorage::write_region(std::uint64_t virtual_address,
                                        std::span<const std::byte> payload) {
  if (payload.size() != config_.region_size) {
    throw Error(Errc::kSizeMismatch, "region payload is " + std::to_string(payload.size()) +
                                         " bytes, expected " +
                                         std::to_string(config_.region_size));
  }
  if (virtual_address % config_.region_size != 0) {
    throw Error(Errc::kMisaligned,
                "virtual address " + std::to_string(virtual_address) + " is not region aligned");
  }
  const std::uint32_t zone = acquire_write_zone(false);
  std::uint64_t physical = 0;
  try {
    physical = device_.append(zone, payload);
  } catch (...) {
    {
      std::lock_guard lk(state_mu_);
      zones_[zone].reserved -= config_.region_size;
    }
    release_write_zone(zone);
    throw;
  }
  std::optional<std::uint64_t> old;
  {
    std::unique_lock m(map_mu_);
    old = map_.assign(virtual_address, physical);
  }
  {
    std::lock_guard lk(state_mu_);
    counters_.region_bytes_written += payload.size();
  }
  release_write_zone(zone);
  if (old && config_.reset_when_invalid) {
    maybe_eager_reset(map_.zone_of(*old));
  }
  if (config_.gc_enabled) {
    bg_cv_.notify_one();
  }
  return physical;
}

std::vector<std::byte> ZoneStorage::read_region(std::uint64_t virtual_address) const {
  std::vector<std::byte> out(config_.region_size);
  read_region_into(virtual_address, 0, out);
  return out;
}

void ZoneStorage::read_region_into(std::uint64_t virtual_address, std::uint64_t offset,
                                   std::span<std::byte> out) const {
  if (offset > config_.region_size || out.size() > config_.region_size - offset) {
    throw Error(Errc::kOutOfRange, "read past the end of a region");
  }
  zns::Device::ReaderLease lease;
  std::uint64_t physical = 0;
  {
    std::shared_lock m(map_mu_);
    auto p = map_.lookup(virtual_address);
    if (!p) {
      throw Error(Errc::kUnmappedRegion,
                  "virtual address " + std::to_string(virtual_address) + " is not mapped");
    }
    physical = *p;
    lease = device_.acquire_reader(map_.zone_of(physical));
  }
  device_.read_into(physical + offset, out);
}

void ZoneStorage::invalidate_region(std::uint64_t virtual_address) {
  std::optional<std::uint64_t> old;
  {
    std::unique_lock m(map_mu_);
    old = map_.erase(virtual_address);
  }
  if (!old) {
    throw Error(Errc::kUnmappedRegion,
                "virtual address " + std::to_string(virtual_address) + " is not mapped");
  }
  if (config_.reset_when_invalid) {
    maybe_eager_reset(map_.zone_of(*old));
  }
}

void ZoneStorage::maybe_eager_reset(std::uint32_t zone) {
  {
    std::lock_guard lk(state_mu_);
    if (zones_[zone].group != ZoneGroup::kRead) {
      return;
    }
    std::shared_lock m(map_mu_);
    if (map_.valid_regions(zone) != 0) {
      return;
    }
    zones_[zone].group = ZoneGroup::kCleaning;
  }
  reset_zone_blocking(zone);
  {
    std::lock_guard lk(state_mu_);
    zones_[zone].group = ZoneGroup::kEmpty;
    zones_[zone].reserved = 0;
    ++empty_count_;
    ++counters_.eager_resets;
  }
  space_cv_.notify_all();
}

void ZoneStorage::reset_zone_blocking(std::uint32_t zone) {
  for (;;) {
    try {
      device_.reset(zone);
      return;
    } catch (const Error& e) {
      if (e.code() != Errc::kZoneBusy) {
        throw;
      }
    }
    std::this_thread::yield();
  }
}

std::uint32_t ZoneStorage::select_victim_locked() const {
  std::vector<std::uint64_t> scores(zones_.size(), kNotCandidate);
  {
    std::shared_lock m(map_mu_);
    for (std::uint32_t z = 0; z < zones_.size(); ++z) {
      if (zones_[z].group == ZoneGroup::kRead) {
        scores[z] = map_.valid_bytes(z);
      }
    }
  }
  const std::size_t best = simd::argmin(scores);
  if (scores[best] == kNotCandidate) {
    throw Error(Errc::kNoVictimAvailable, "no read zone to clean");
  }
  return static_cast<std::uint32_t>(best);
}

std::uint32_t ZoneStorage::select_victim() const {
  std::lock_guard lk(state_mu_);
  return select_victim_locked();
}

bool ZoneStorage::gc_needed() const {
  if (!config_.gc_enabled) {
    return false;
  }
  std::lock_guard lk(state_mu_);
  return empty_count_ < trigger_threshold_ + reserve_locked();
}

void ZoneStorage::notify(const GcEvent& e) {
  if (observer_) {
    observer_(e);
  }
}

void ZoneStorage::set_gc_observer(GcObserver observer) {
  std::lock_guard g(gc_mu_);
  observer_ = std::move(observer);
}

GcStats ZoneStorage::gc_cycle(const DropFilter& filter) {
  std::lock_guard g(gc_mu_);
  GcStats stats;
  if (!gc_needed()) {
    return stats;
  }
  struct ReleaseOnExit {
    ZoneStorage* self;
    ~ReleaseOnExit() {
      std::lock_guard lk(self->state_mu_);
      self->release_gc_zones_locked();
    }
  } release_on_exit{this};
  stats.empty_before = empty_zone_count();
  notify({GcEvent::Kind::kEnter, stats.empty_before, 0, 0, 0});

  const std::uint64_t capacity = device_.config().zone_capacity;
  const std::size_t max_victims = 2 * zones_.size() + 2;
  std::size_t victims = 0;
  std::vector<std::byte> buffer(config_.region_size);

  std::uint32_t target;
  {
    std::lock_guard lk(state_mu_);
    target = stop_threshold_ + reserve_locked();
  }
  while (empty_zone_count() < target) {
    if (++victims > max_victims) {
      throw Error(Errc::kGcStalled, "GC is not making progress toward the high watermark");
    }
    GcEvent victim_event{GcEvent::Kind::kVictim, 0, 0, 0, std::numeric_limits<std::uint64_t>::max()};
    std::uint32_t victim = 0;
    {
      std::lock_guard lk(state_mu_);
      try {
        victim = select_victim_locked();
      } catch (const Error&) {
        throw Error(Errc::kGcStalled, "below the low watermark with no read zone to clean");
      }
      std::shared_lock m(map_mu_);
      double invalid_sum = 0;
      std::size_t read_zones = 0;
      for (std::uint32_t z = 0; z < zones_.size(); ++z) {
        if (zones_[z].group != ZoneGroup::kRead) {
          continue;
        }
        ++read_zones;
        invalid_sum += static_cast<double>(capacity - map_.valid_bytes(z)) / capacity;
        if (z != victim) {
          victim_event.min_other_valid_bytes =
              std::min(victim_event.min_other_valid_bytes, map_.valid_bytes(z));
        }
      }
      victim_event.zone = victim;
      victim_event.victim_valid_bytes = map_.valid_bytes(victim);
      victim_event.empty_zones = empty_count_;
      stats.victim_invalid_ratio_sum +=
          static_cast<double>(capacity - map_.valid_bytes(victim)) / capacity;
      stats.mean_invalid_ratio_sum += invalid_sum / static_cast<double>(read_zones);
      zones_[victim].group = ZoneGroup::kCleaning;
    }
    notify(victim_event);

    std::vector<std::pair<std::uint64_t, std::uint64_t>> entries;
    {
      std::shared_lock m(map_mu_);
      entries = map_.zone_entries(victim);
    }
    for (const auto& [physical, virt] : entries) {
      for (;;) {
        const DropDecision d = filter(virt, victim);
        if (d == DropDecision::kWait) {
          ++stats.waits;
          std::this_thread::yield();
          continue;
        }
        if (d == DropDecision::kSkip) {
          ++stats.skipped_regions;
        } else if (d == DropDecision::kDrop) {
          std::unique_lock m(map_mu_);
          if (map_.lookup(virt) == physical) {
            map_.erase(virt);
            ++stats.dropped_regions;
          } else {
            ++stats.skipped_regions;
          }
        } else {
          bool still_mapped;
          {
            std::shared_lock m(map_mu_);
            still_mapped = map_.lookup(virt) == physical;
          }
          if (!still_mapped) {
            ++stats.skipped_regions;
            break;
          }
          device_.read_into(physical, buffer);
          const std::uint32_t target = acquire_write_zone(true);
          std::uint64_t moved_to = 0;
          try {
            moved_to = device_.append(target, buffer);
          } catch (...) {
            {
              std::lock_guard lk(state_mu_);
              zones_[target].reserved -= config_.region_size;
            }
            release_write_zone(target);
            throw;
          }
          {
            std::unique_lock m(map_mu_);
            // The cache may have evicted or rewritten the region meanwhile;
            // then the copy just written is garbage and the map stays as is.
            if (map_.lookup(virt) == physical) {
              map_.assign(virt, moved_to);
            }
          }
          release_write_zone(target);
          stats.migrated_bytes += config_.region_size;
          ++stats.migrated_regions;
        }
        break;
      }
    }
    {
      std::unique_lock m(map_mu_);
      for (const auto& [physical, virt] : map_.zone_entries(victim)) {
        map_.erase(virt);
        ++stats.orphaned_regions;
      }
    }
    reset_zone_blocking(victim);
    {
      std::lock_guard lk(state_mu_);
      zones_[victim].group = ZoneGroup::kEmpty;
      zones_[victim].reserved = 0;
      ++empty_count_;
    }
    space_cv_.notify_all();
    ++stats.zones_reclaimed;
  }

  stats.empty_after = empty_zone_count();
  {
    std::lock_guard lk(state_mu_);
    ++counters_.gc_cycles;
    counters_.gc_migrated_bytes += stats.migrated_bytes;
    counters_.gc_read_bytes += stats.migrated_bytes;
    counters_.zones_reclaimed += stats.zones_reclaimed;
    counters_.dropped_regions += stats.dropped_regions;
    counters_.victim_invalid_ratio_sum += stats.victim_invalid_ratio_sum;
    counters_.mean_invalid_ratio_sum += stats.mean_invalid_ratio_sum;
  }
  notify({GcEvent::Kind::kExit, stats.empty_after, 0, 0, 0});
  return stats;
}

void ZoneStorage::background_loop(DropFilter filter) {
  std::unique_lock lk(bg_mu_);
  while (!bg_stop_) {
    bg_cv_.wait_for(lk, std::chrono::milliseconds(5), [&] { return bg_stop_ || gc_needed(); });
    if (bg_stop_) {
      break;
    }
    if (!gc_needed()) {
      continue;
    }
    lk.unlock();
    try {
      gc_cycle(filter);
    } catch (...) {
      {
        std::lock_guard st(state_mu_);
        bg_error_ = std::current_exception();
      }
      space_cv_.notify_all();
      lk.lock();
      break;
    }
    lk.lock();
  }
}

void ZoneStorage::start_background_gc(DropFilter filter) {
  if (!config_.gc_enabled) {
    return;
  }
  {
    std::lock_guard st(state_mu_);
    if (bg_running_) {
      return;
    }
    bg_running_ = true;
    bg_error_ = nullptr;
  }
  {
    std::lock_guard lk(bg_mu_);
    bg_stop_ = false;
  }
  bg_thread_ = std::thread([this, f = std::move(filter)] { background_loop(f); });
}

void ZoneStorage::stop_background_gc() {
  {
    std::lock_guard lk(bg_mu_);
    bg_stop_ = true;
  }
  bg_cv_.notify_all();
  if (bg_thread_.joinable()) {
    bg_thread_.join();
  }
  std::exception_ptr error;
  {
    std::lock_guard st(state_mu_);
    bg_running_ = false;
    error = std::exchange(bg_error_, nullptr);
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

std::optional<std::uint64_t> ZoneStorage::physical_of(std::uint64_t virtual_address) const {
  std::shared_lock m(map_mu_);
  return map_.lookup(virtual_address);
}

std::optional<std::uint32_t> ZoneStorage::zone_of_region(std::uint64_t virtual_address) const {
  std::shared_lock m(map_mu_);
  auto p = map_.lookup(virtual_address);
  if (!p) {
    return std::nullopt;
  }
  return map_.zone_of(*p);
}

std::uint64_t ZoneStorage::zone_valid_bytes(std::uint32_t zone) const {
  std::shared_lock m(map_mu_);
  return map_.valid_bytes(zone);
}

std::uint32_t ZoneStorage::zone_valid_regions(std::uint32_t zone) const {
  std::shared_lock m(map_mu_);
  return map_.valid_regions(zone);
}

ZoneGroup ZoneStorage::zone_group(std::uint32_t zone) const {
  std::lock_guard lk(state_mu_);
  return zones_.at(zone).group;
}

std::uint32_t ZoneStorage::empty_zone_count() const {
  std::lock_guard lk(state_mu_);
  return empty_count_;
}

ZoneGroupsSnapshot ZoneStorage::groups() const {
  std::lock_guard lk(state_mu_);
  ZoneGroupsSnapshot s;
  for (std::uint32_t z = 0; z < zones_.size(); ++z) {
    switch (zones_[z].group) {
      case ZoneGroup::kEmpty: s.empty_set.push_back(z); break;
      case ZoneGroup::kWrite: s.write_set.push_back(z); break;
      case ZoneGroup::kRead:
      case ZoneGroup::kCleaning: s.read_set.push_back(z); break;
    }
  }
  return s;
}

std::map<std::uint64_t, std::uint64_t> ZoneStorage::forward_map() const {
  std::shared_lock m(map_mu_);
  return map_.forward();
}

StorageCounters ZoneStorage::counters() const {
  std::lock_guard lk(state_mu_);
  return counters_;
}

void ZoneStorage::check_consistency() const {
  std::lock_guard lk(state_mu_);
  std::shared_lock m(map_mu_);
  map_.check_consistency();
  std::uint32_t empty = 0;
  std::uint32_t write = 0;
  for (std::uint32_t z = 0; z < zones_.size(); ++z) {
    const zns::ZoneState ds = device_.state(z);
    const ZoneGroup g = zones_[z].group;
    const bool ok = (g == ZoneGroup::kEmpty && ds == zns::ZoneState::kEmpty) ||
                    (g == ZoneGroup::kWrite && ds != zns::ZoneState::kFull) ||
                    (g == ZoneGroup::kRead && ds == zns::ZoneState::kFull) ||
                    g == ZoneGroup::kCleaning;
    if (!ok) {
      throw Error(Errc::kInvalidConfig, "zone " + std::to_string(z) + " is in group " +
                                            zone_group_name(g) + " but the device reports " +
                                            zns::zone_state_name(ds));
    }
    empty += g == ZoneGroup::kEmpty;
    write += g == ZoneGroup::kWrite;
    for (const auto& [phys, virt] : map_.zone_entries(z)) {
      if (phys + config_.region_size > device_.zone_start(z) + device_.write_pointer(z)) {
        throw Error(Errc::kInvalidConfig, "mapping for " + std::to_string(virt) +
                                              " points past the write pointer");
      }
    }
  }
  if (empty != empty_count_ || write != write_count_ || write > config_.max_write_zones) {
    throw Error(Errc::kInvalidConfig, "zone group counters are inconsistent");
  }
}

}  // namespace zcs::zstorage
