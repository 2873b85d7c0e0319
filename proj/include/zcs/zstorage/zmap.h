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
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace zcs::zstorage {

// Bidirectional region mapping: region virtual address <-> device physical
// address, one entry per region. The reverse side is kept per zone so GC can
// enumerate a victim's valid regions in physical order. Both directions are
// updated together by every mutator. Not internally synchronized.
class ZMap {
 public:
  ZMap(std::uint32_t zone_count, std::uint64_t zone_capacity, std::uint64_t region_size);

  std::optional<std::uint64_t> lookup(std::uint64_t virtual_address) const;
  std::optional<std::uint64_t> reverse_lookup(std::uint64_t physical_address) const;

  // Maps `virtual_address` to `physical_address`, returning the physical
  // address it replaced, if any.
  std::optional<std::uint64_t> assign(std::uint64_t virtual_address,
                                      std::uint64_t physical_address);
  std::optional<std::uint64_t> erase(std::uint64_t virtual_address);

  std::uint64_t valid_bytes(std::uint32_t zone) const { return valid_regions_[zone] * region_size_; }
  std::uint32_t valid_regions(std::uint32_t zone) const { return valid_regions_[zone]; }

  // (physical, virtual) pairs of one zone, ascending physical address.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> zone_entries(std::uint32_t zone) const;

  const std::map<std::uint64_t, std::uint64_t>& forward() const { return forward_; }
  std::size_t size() const { return forward_.size(); }
  std::uint32_t zone_of(std::uint64_t physical_address) const {
    return static_cast<std::uint32_t>(physical_address / zone_capacity_);
  }

  // Throws if the two directions or the per-zone statistics disagree.
  void check_consistency() const;

 private:
  std::uint64_t zone_capacity_;
  std::uint64_t region_size_;
  std::map<std::uint64_t, std::uint64_t> forward_;
  std::vector<std::map<std::uint64_t, std::uint64_t>> reverse_;
  std::vector<std::uint32_t> valid_regions_;
};

}  // namespace zcs::zstorage
