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

#include "zcs/zstorage/zmap.h"

#include <string>

#include "zcs/error.h"

namespace zcs::zstorage {

ZMap::ZMap(std::uint32_t zone_count, std::uint64_t zone_capacity, std::uint64_t region_size)
    : zone_capacity_(zone_capacity),
      region_size_(region_size),
      reverse_(zone_count),
      valid_regions_(zone_count, 0) {}

std::optional<std::uint64_t> ZMap::lookup(std::uint64_t virtual_address) const {
  auto it = forward_.find(virtual_address);
  if (it == forward_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::optional<std::uint64_t> ZMap::reverse_lookup(std::uint64_t physical_address) const {
  const auto& zone = reverse_.at(zone_of(physical_address));
  auto it = zone.find(physical_address);
  if (it == zone.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::optional<std::uint64_t> ZMap::assign(std::uint64_t virtual_address,
                                          std::uint64_t physical_address) {
  const std::uint32_t zone = zone_of(physical_address);
  if (reverse_.at(zone).count(physical_address) != 0) {
    throw Error(Errc::kInvalidConfig,
                "physical address " + std::to_string(physical_address) + " mapped twice");
  }
  std::optional<std::uint64_t> old = erase(virtual_address);
  reverse_[zone].emplace(physical_address, virtual_address);
  forward_.emplace(virtual_address, physical_address);
  ++valid_regions_[zone];
  return old;
}

std::optional<std::uint64_t> ZMap::erase(std::uint64_t virtual_address) {
  auto it = forward_.find(virtual_address);
  if (it == forward_.end()) {
    return std::nullopt;
  }
  const std::uint64_t physical = it->second;
  const std::uint32_t zone = zone_of(physical);
  reverse_[zone].erase(physical);
  --valid_regions_[zone];
  forward_.erase(it);
  return physical;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> ZMap::zone_entries(std::uint32_t zone) const {
  const auto& m = reverse_.at(zone);
  return {m.begin(), m.end()};
}

void ZMap::check_consistency() const {
  std::size_t reverse_total = 0;
  for (std::uint32_t z = 0; z < reverse_.size(); ++z) {
    if (reverse_[z].size() != valid_regions_[z]) {
      throw Error(Errc::kUnmappedRegion, "zone " + std::to_string(z) + " valid count mismatch");
    }
    for (const auto& [phys, virt] : reverse_[z]) {
      auto it = forward_.find(virt);
      if (it == forward_.end() || it->second != phys || zone_of(phys) != z) {
        throw Error(Errc::kUnmappedRegion,
                    "reverse entry " + std::to_string(phys) + " has no matching forward entry");
      }
    }
    reverse_total += reverse_[z].size();
  }
  if (reverse_total != forward_.size()) {
    throw Error(Errc::kUnmappedRegion, "forward and reverse maps differ in size");
  }
}

}  // namespace zcs::zstorage
