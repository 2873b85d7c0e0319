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

#include "zcs/zns/device.h"

#include <string>

#include "zcs/error.h"

namespace zcs::zns {

const char* zone_state_name(ZoneState state) {
  switch (state) {
    case ZoneState::kEmpty: return "Empty";
    case ZoneState::kOpen: return "Open";
    case ZoneState::kFull: return "Full";
  }
  return "Unknown";
}

void DeviceConfig::validate() const {
  if (zone_count < 1) {
    throw Error(Errc::kInvalidConfig, "zone_count must be >= 1");
  }
  if (zone_capacity < 1) {
    throw Error(Errc::kInvalidConfig, "zone_capacity must be >= 1");
  }
  if (zone_capacity % kPageSize != 0) {
    throw Error(Errc::kInvalidConfig,
                "zone_capacity must be a multiple of 4096, got " + std::to_string(zone_capacity));
  }
  if (max_open_zones < 1 || max_open_zones > zone_count) {
    throw Error(Errc::kInvalidConfig, "max_open_zones must be in [1, zone_count], got " +
                                          std::to_string(max_open_zones));
  }
  if (read_bandwidth == 0 || write_bandwidth == 0) {
    throw Error(Errc::kInvalidConfig, "bandwidths must be positive");
  }
}

Device::Device(DeviceConfig config) : config_(config) {
  config_.validate();
  zones_.reserve(config_.zone_count);
  for (std::uint32_t i = 0; i < config_.zone_count; ++i) {
    zones_.push_back(std::make_unique<Zone>());
  }
}

Device::Zone& Device::zone(std::uint32_t zone_id) const {
  if (zone_id >= zones_.size()) {
    throw Error(Errc::kOutOfRange, "zone " + std::to_string(zone_id) + " does not exist");
  }
  return *zones_[zone_id];
}

void Device::release_open_slot() {
  std::lock_guard lk(open_mu_);
  --open_zones_;
}

std::uint64_t Device::append(std::uint32_t zone_id, std::span<const std::byte> payload) {
  Zone& z = zone(zone_id);
  if (z.appending.exchange(true)) {
    throw Error(Errc::kZoneBusy, "concurrent append to zone " + std::to_string(zone_id));
  }
  struct ClearFlag {
    std::atomic<bool>& flag;
    ~ClearFlag() { flag.store(false); }
  } clear{z.appending};

  std::unique_lock lk(z.data);
  if (z.state == ZoneState::kFull) {
    throw Error(Errc::kZoneNotWritable, "zone " + std::to_string(zone_id) + " is full");
  }
  if (payload.size() > config_.zone_capacity - z.write_pointer) {
    throw Error(Errc::kZoneFull, "zone " + std::to_string(zone_id) + " has " +
                                     std::to_string(config_.zone_capacity - z.write_pointer) +
                                     " bytes left, append needs " +
                                     std::to_string(payload.size()));
  }
  if (z.state == ZoneState::kEmpty) {
    std::lock_guard open_lk(open_mu_);
    if (open_zones_ >= config_.max_open_zones) {
      throw Error(Errc::kMaxOpenZonesExceeded,
                  "opening zone " + std::to_string(zone_id) + " exceeds " +
                      std::to_string(config_.max_open_zones) + " open zones");
    }
    ++open_zones_;
    z.state = ZoneState::kOpen;
  }
  const std::uint64_t offset = z.write_pointer;
  if (!z.pages) {
    z.pages.emplace(kPageSize, config_.zone_capacity / kPageSize);
  }
  z.pages->write(offset, payload);
  z.write_pointer += payload.size();
  appended_.fetch_add(payload.size());
  if (z.write_pointer == config_.zone_capacity) {
    z.state = ZoneState::kFull;
    release_open_slot();
  }
  return zone_start(zone_id) + offset;
}

std::vector<std::byte> Device::read(std::uint64_t physical_address, std::uint64_t length) const {
  std::vector<std::byte> out(length);
  read_into(physical_address, out);
  return out;
}

void Device::read_into(std::uint64_t physical_address, std::span<std::byte> out) const {
  if (physical_address >= config_.capacity_bytes()) {
    throw Error(Errc::kOutOfRange, "address " + std::to_string(physical_address) +
                                       " is past the end of the device");
  }
  const std::uint32_t zone_id = zone_of(physical_address);
  const std::uint64_t offset = physical_address - zone_start(zone_id);
  if (out.size() > config_.zone_capacity - offset) {
    throw Error(Errc::kCrossZoneRead, "read of " + std::to_string(out.size()) + " bytes at " +
                                          std::to_string(physical_address) +
                                          " crosses a zone boundary");
  }
  const Zone& z = zone(zone_id);
  std::shared_lock lk(z.data);
  if (offset + out.size() > z.write_pointer || (out.empty() && offset >= z.write_pointer)) {
    throw Error(Errc::kReadBeyondWritePointer,
                "read at " + std::to_string(physical_address) + " length " +
                    std::to_string(out.size()) + " beyond write pointer " +
                    std::to_string(z.write_pointer) + " of zone " + std::to_string(zone_id));
  }
  if (!out.empty()) {
    z.pages->read(offset, out);
  }
  read_bytes_.fetch_add(out.size());
}

void Device::reset(std::uint32_t zone_id) {
  Zone& z = zone(zone_id);
  std::unique_lock gate(z.gate, std::try_to_lock);
  if (!gate.owns_lock()) {
    throw Error(Errc::kZoneBusy, "zone " + std::to_string(zone_id) + " has active readers");
  }
  std::unique_lock lk(z.data);
  if (z.state == ZoneState::kOpen) {
    release_open_slot();
  }
  z.pages.reset();
  z.state = ZoneState::kEmpty;
  z.write_pointer = 0;
  ++z.reset_count;
  resets_.fetch_add(1);
}

void Device::finish(std::uint32_t zone_id) {
  Zone& z = zone(zone_id);
  std::unique_lock lk(z.data);
  if (z.state != ZoneState::kOpen) {
    throw Error(Errc::kZoneNotOpen, "zone " + std::to_string(zone_id) + " is " +
                                        zone_state_name(z.state));
  }
  z.state = ZoneState::kFull;
  release_open_slot();
}

DeviceReport Device::report() const {
  std::vector<std::shared_lock<std::shared_mutex>> locks;
  locks.reserve(zones_.size());
  for (const auto& z : zones_) {
    locks.emplace_back(z->data);
  }
  DeviceReport r;
  r.zones.reserve(zones_.size());
  for (std::uint32_t i = 0; i < zones_.size(); ++i) {
    const Zone& z = *zones_[i];
    r.zones.push_back({i, z.state, z.write_pointer, z.reset_count});
  }
  r.counters.total_appended_bytes = appended_.load();
  r.counters.total_read_bytes = read_bytes_.load();
  r.counters.total_resets = resets_.load();
  r.counters.open_zone_count = open_zone_count();
  return r;
}

ZoneState Device::state(std::uint32_t zone_id) const {
  const Zone& z = zone(zone_id);
  std::shared_lock lk(z.data);
  return z.state;
}

std::uint64_t Device::write_pointer(std::uint32_t zone_id) const {
  const Zone& z = zone(zone_id);
  std::shared_lock lk(z.data);
  return z.write_pointer;
}

std::uint64_t Device::remaining(std::uint32_t zone_id) const {
  const Zone& z = zone(zone_id);
  std::shared_lock lk(z.data);
  return z.state == ZoneState::kFull ? 0 : config_.zone_capacity - z.write_pointer;
}

std::uint32_t Device::open_zone_count() const {
  std::lock_guard lk(open_mu_);
  return open_zones_;
}

std::size_t Device::raw_page_count() const {
  std::size_t n = 0;
  for (const auto& z : zones_) {
    std::shared_lock lk(z->data);
    n += z->pages ? z->pages->raw_page_count() : 0;
  }
  return n;
}

Device::ReaderLease Device::acquire_reader(std::uint32_t zone_id) const {
  return ReaderLease(zone(zone_id).gate);
}

}  // namespace zcs::zns
