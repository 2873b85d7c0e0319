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

#include "zcs/cache/cache.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <string>

#include "zcs/error.h"

namespace zcs::cache {

using zstorage::DropDecision;

const char* policy_name(Policy p) {
  switch (p) {
    case Policy::kFifo: return "fifo";
    case Policy::kLru: return "lru";
    case Policy::kZlru: return "zlru";
  }
  return "unknown";
}

const char* region_status_name(RegionStatus s) {
  switch (s) {
    case RegionStatus::kFree: return "free";
    case RegionStatus::kBuffered: return "buffered";
    case RegionStatus::kFlushed: return "flushed";
    case RegionStatus::kEvicting: return "evicting";
    case RegionStatus::kEvicted: return "evicted";
  }
  return "unknown";
}

void CacheConfig::validate() const {
  if (region_size == 0 || region_size % zns::kPageSize != 0) {
    throw Error(Errc::kInvalidConfig, "region_size must be a positive multiple of 4096");
  }
  if (cache_capacity_regions < 2) {
    throw Error(Errc::kInvalidConfig, "the cache needs at least two region slots");
  }
  if (!(vop_ratio >= 0.0 && vop_ratio <= 1.0)) {
    throw Error(Errc::kInvalidConfig, "vop_ratio must be in [0, 1]");
  }
  if (item_alignment == 0 || region_size % item_alignment != 0) {
    throw Error(Errc::kInvalidConfig, "item_alignment must divide region_size");
  }
}

Cache::Cache(CacheConfig config, RegionDevice& backend)
    : config_(config), backend_(backend), main_cap_(0) {
  config_.validate();
  main_cap_ = config_.cache_capacity_regions;
  if (partitioned()) {
    main_cap_ = static_cast<std::size_t>(
        std::llround((1.0 - config_.vop_ratio) * config_.cache_capacity_regions));
  }
  regions_.resize(config_.cache_capacity_regions);
}

void Cache::insert(Key key, std::span<const std::byte> value) {
  if (value.size() > config_.region_size) {
    throw Error(Errc::kItemTooLarge, "item of " + std::to_string(value.size()) +
                                         " bytes exceeds the region size " +
                                         std::to_string(config_.region_size));
  }
  Lock lk(mu_);
  if (buffer_slot_ && buffer_offset_ + value.size() > config_.region_size) {
    flush_locked(lk);
  }
  if (!buffer_slot_) {
    allocate_buffer_locked(lk);
  }
  const std::uint32_t slot = *buffer_slot_;
  const std::uint64_t offset = buffer_offset_;
  std::memcpy(buffer_.data() + offset, value.data(), value.size());
  const std::uint64_t a = config_.item_alignment;
  const std::uint64_t end = std::min(config_.region_size, (offset + value.size() + a - 1) / a * a);
  std::fill(buffer_.begin() + static_cast<std::ptrdiff_t>(offset + value.size()),
            buffer_.begin() + static_cast<std::ptrdiff_t>(end), std::byte{0});
  buffer_offset_ = end;
  index_[key] = ItemLocation{slot, offset, value.size()};
  regions_[slot].keys.push_back(key);
  stats_.inserted_bytes += value.size();
}

std::optional<std::vector<std::byte>> Cache::lookup(Key key) {
  Lock lk(mu_);
  auto it = index_.find(key);
  if (it == index_.end()) {
    ++stats_.misses;
    return std::nullopt;
  }
  const ItemLocation loc = it->second;
  std::vector<std::byte> out(loc.size);
  Region& r = regions_[loc.region];
  if (r.status == RegionStatus::kBuffered) {
    std::memcpy(out.data(), buffer_.data() + loc.offset, loc.size);
  } else {
    backend_.read(loc.region, loc.offset, out);
    if (config_.policy != Policy::kFifo) {
      unlink_locked(loc.region);
      push_main_head_locked(loc.region);
      rebalance_locked();
    }
  }
  ++stats_.hits;
  return out;
}

std::uint32_t Cache::evict_one() {
  Lock lk(mu_);
  return evict_one_locked(lk);
}

void Cache::flush() {
  Lock lk(mu_);
  flush_locked(lk);
}

std::size_t Cache::zlru_reorder() {
  Lock lk(mu_);
  return zlru_reorder_locked();
}

void Cache::allocate_buffer_locked(Lock& lk) {
  auto lowest_free = [&]() -> std::optional<std::uint32_t> {
    for (std::uint32_t s = 0; s < regions_.size(); ++s) {
      if (regions_[s].status == RegionStatus::kFree) {
        return s;
      }
    }
    return std::nullopt;
  };
  auto slot = lowest_free();
  if (!slot) {
    evict_one_locked(lk);
    slot = lowest_free();
    if (!slot) {
      throw Error(Errc::kNothingToEvict, "eviction did not free a region slot");
    }
  }
  Region& r = regions_[*slot];
  r.status = RegionStatus::kBuffered;
  r.keys.clear();
  if (buffer_.size() != config_.region_size) {
    buffer_.assign(config_.region_size, std::byte{0});
  }
  buffer_slot_ = *slot;
  buffer_offset_ = 0;
}

void Cache::flush_locked(Lock& lk) {
  if (!buffer_slot_) {
    return;
  }
  const std::uint32_t slot = *buffer_slot_;
  std::fill(buffer_.begin() + static_cast<std::ptrdiff_t>(buffer_offset_), buffer_.end(),
            std::byte{0});
  lk.unlock();
  try {
    backend_.write_region(slot, buffer_);
  } catch (...) {
    lk.lock();
    throw;
  }
  lk.lock();
  regions_[slot].status = RegionStatus::kFlushed;
  buffer_slot_.reset();
  buffer_offset_ = 0;
  push_main_head_locked(slot);
  rebalance_locked();
  ++stats_.flushed_regions;
  if (partitioned() && config_.zlru_reorder) {
    stats_.reordered_regions += zlru_reorder_locked();
  }
}

std::uint32_t Cache::evict_one_locked(Lock& lk) {
  std::uint32_t slot;
  if (partitioned() && !vop_.empty()) {
    slot = vop_.back();
  } else if (!main_.empty()) {
    slot = main_.back();
  } else {
    throw Error(Errc::kNothingToEvict, "no flushed region to evict");
  }
  unlink_locked(slot);
  regions_[slot].status = RegionStatus::kEvicting;
  drop_index_locked(slot);
  lk.unlock();
  try {
    backend_.invalidate_region(slot);
  } catch (...) {
    lk.lock();
    regions_[slot].status = RegionStatus::kEvicted;
    regions_[slot].status = RegionStatus::kFree;
    throw;
  }
  lk.lock();
  regions_[slot].status = RegionStatus::kEvicted;
  regions_[slot].status = RegionStatus::kFree;
  ++stats_.evicted_regions;
  return slot;
}

void Cache::drop_index_locked(std::uint32_t slot) {
  for (Key key : regions_[slot].keys) {
    auto it = index_.find(key);
    if (it != index_.end() && it->second.region == slot) {
      index_.erase(it);
    }
  }
  regions_[slot].keys.clear();
}

void Cache::unlink_locked(std::uint32_t slot) {
  Region& r = regions_[slot];
  if (r.part == Part::kMain) {
    main_.erase(r.pos);
  } else if (r.part == Part::kVop) {
    vop_.erase(r.pos);
  }
  r.part = Part::kNone;
}

void Cache::push_main_head_locked(std::uint32_t slot) {
  main_.push_front(slot);
  regions_[slot].part = Part::kMain;
  regions_[slot].pos = main_.begin();
}

void Cache::rebalance_locked() {
  if (!partitioned()) {
    return;
  }
  while (main_.size() > main_cap_) {
    const std::uint32_t slot = main_.back();
    main_.pop_back();
    vop_.push_front(slot);
    regions_[slot].part = Part::kVop;
    regions_[slot].pos = vop_.begin();
  }
}

std::vector<std::uint32_t> Cache::candidate_zones_locked() const {
  std::map<std::uint32_t, std::uint64_t> main_count;
  auto tally = [&](const std::list<std::uint32_t>& part, bool is_main) {
    for (std::uint32_t slot : part) {
      if (auto z = backend_.zone_of(slot)) {
        main_count[*z] += is_main ? 1 : 0;
      }
    }
  };
  tally(main_, true);
  tally(vop_, false);
  std::uint64_t sum = 0;
  for (const auto& [zone, count] : main_count) {
    sum += count;
  }
  const std::uint64_t holders = main_count.size();
  std::vector<std::uint32_t> out;
  for (const auto& [zone, count] : main_count) {
    if (count * holders < sum) {
      out.push_back(zone);
    }
  }
  return out;
}

std::vector<std::uint32_t> Cache::candidate_zones() const {
  Lock lk(mu_);
  return candidate_zones_locked();
}

std::size_t Cache::zlru_reorder_locked() {
  if (!partitioned() || vop_.empty()) {
    return 0;
  }
  const std::vector<std::uint32_t> cands = candidate_zones_locked();
  if (cands.empty()) {
    return 0;
  }
  std::vector<std::list<std::uint32_t>::iterator> moving;
  for (auto it = vop_.begin(); it != vop_.end(); ++it) {
    auto z = backend_.zone_of(*it);
    if (z && std::binary_search(cands.begin(), cands.end(), *z)) {
      moving.push_back(it);
    }
  }
  for (auto it : moving) {
    vop_.splice(vop_.end(), vop_, it);
  }
  return moving.size();
}

DropDecision Cache::zdrop_filter(std::uint64_t virtual_address, std::uint32_t victim_zone) {
  const std::uint64_t slot64 = virtual_address / config_.region_size;
  if (slot64 >= regions_.size()) {
    return DropDecision::kSkip;
  }
  const auto slot = static_cast<std::uint32_t>(slot64);
  Lock lk(mu_);
  Region& r = regions_[slot];
  if (r.status == RegionStatus::kEvicting) {
    return DropDecision::kWait;
  }
  if (r.status != RegionStatus::kFlushed) {
    return DropDecision::kSkip;
  }
  auto zone = backend_.zone_of(slot);
  if (!zone || *zone != victim_zone) {
    return DropDecision::kSkip;
  }
  if (partitioned() && (r.part == Part::kVop || config_.vop_ratio >= 1.0)) {
    unlink_locked(slot);
    r.status = RegionStatus::kEvicting;
    drop_index_locked(slot);
    r.status = RegionStatus::kEvicted;
    r.status = RegionStatus::kFree;
    ++stats_.dropped_regions;
    return DropDecision::kDrop;
  }
  return DropDecision::kMigrate;
}

CacheStats Cache::stats() const {
  Lock lk(mu_);
  return stats_;
}

RegionStatus Cache::region_status(std::uint32_t slot) const {
  Lock lk(mu_);
  return regions_.at(slot).status;
}

std::vector<std::uint32_t> Cache::main_partition() const {
  Lock lk(mu_);
  return {main_.begin(), main_.end()};
}

std::vector<std::uint32_t> Cache::vop_partition() const {
  Lock lk(mu_);
  return {vop_.begin(), vop_.end()};
}

std::optional<ItemLocation> Cache::location_of(Key key) const {
  Lock lk(mu_);
  auto it = index_.find(key);
  if (it == index_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::vector<Key> Cache::indexed_keys() const {
  Lock lk(mu_);
  std::vector<Key> keys;
  keys.reserve(index_.size());
  for (const auto& [key, loc] : index_) {
    keys.push_back(key);
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

void Cache::check_consistency() const {
  Lock lk(mu_);
  auto fail = [](const std::string& what) { throw Error(Errc::kInvalidConfig, what); };
  std::vector<int> seen(regions_.size(), 0);
  auto walk = [&](const std::list<std::uint32_t>& part, Part tag) {
    for (auto it = part.begin(); it != part.end(); ++it) {
      const Region& r = regions_.at(*it);
      if (r.status != RegionStatus::kFlushed || r.part != tag || r.pos != it) {
        fail("region " + std::to_string(*it) + " is listed but not a flushed member");
      }
      ++seen[*it];
    }
  };
  walk(main_, Part::kMain);
  walk(vop_, Part::kVop);
  std::size_t buffered = 0;
  for (std::uint32_t s = 0; s < regions_.size(); ++s) {
    const RegionStatus st = regions_[s].status;
    if ((st == RegionStatus::kFlushed) != (seen[s] == 1) || seen[s] > 1) {
      fail("region " + std::to_string(s) + " list membership disagrees with its status");
    }
    if (st == RegionStatus::kBuffered) {
      ++buffered;
      if (buffer_slot_ != s) {
        fail("stray buffered region " + std::to_string(s));
      }
    }
  }
  if (buffered != (buffer_slot_ ? 1u : 0u)) {
    fail("buffered region count is wrong");
  }
  for (const auto& [key, loc] : index_) {
    const RegionStatus st = regions_.at(loc.region).status;
    if (st != RegionStatus::kBuffered && st != RegionStatus::kFlushed) {
      fail("key " + std::to_string(key) + " resolves to a " + region_status_name(st) +
           " region");
    }
    if (loc.offset + loc.size > config_.region_size) {
      fail("key " + std::to_string(key) + " extends past its region");
    }
  }
  if (partitioned()) {
    const double bound = config_.vop_ratio * static_cast<double>(main_.size() + vop_.size()) + 1;
    if (static_cast<double>(vop_.size()) > bound) {
      fail("vOP partition exceeds its share");
    }
  }
}

}  // namespace zcs::cache
