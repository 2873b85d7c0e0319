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

#include "zcs/schemes/engine.h"

#include <cmath>

#include "zcs/error.h"

namespace zcs::schemes {

namespace {

class ZonedBackend final : public cache::RegionDevice {
 public:
  ZonedBackend(zstorage::ZoneStorage& storage, std::uint64_t region_size)
      : storage_(storage), region_size_(region_size) {}

  void write_region(std::uint32_t slot, std::span<const std::byte> data) override {
    storage_.write_region(slot * region_size_, data);
  }
  void read(std::uint32_t slot, std::uint64_t offset, std::span<std::byte> out) override {
    storage_.read_region_into(slot * region_size_, offset, out);
  }
  void invalidate_region(std::uint32_t slot) override {
    storage_.invalidate_region(slot * region_size_);
  }
  std::optional<std::uint32_t> zone_of(std::uint32_t slot) const override {
    return storage_.zone_of_region(slot * region_size_);
  }

 private:
  zstorage::ZoneStorage& storage_;
  std::uint64_t region_size_;
};

// A block-interface SSD never learns that a region was evicted; the next
// write to the same logical range is what invalidates the old pages.
class FtlBackend final : public cache::RegionDevice {
 public:
  FtlBackend(ftl::Ftl& ftl, std::uint64_t region_size) : ftl_(ftl), region_size_(region_size) {}

  void write_region(std::uint32_t slot, std::span<const std::byte> data) override {
    ftl_.write(slot * region_size_, data);
  }
  void read(std::uint32_t slot, std::uint64_t offset, std::span<std::byte> out) override {
    ftl_.read_into(slot * region_size_ + offset, out);
  }
  void invalidate_region(std::uint32_t) override {}
  std::optional<std::uint32_t> zone_of(std::uint32_t) const override { return std::nullopt; }

 private:
  ftl::Ftl& ftl_;
  std::uint64_t region_size_;
};

ftl::FtlConfig ftl_config_for(const SchemeSpec& spec) {
  ftl::FtlConfig fc;
  fc.page_size = zns::kPageSize;
  fc.pages_per_block = spec.ftl_pages_per_block;
  const std::uint64_t block_bytes = fc.page_size * fc.pages_per_block;
  fc.block_count = static_cast<std::uint32_t>(spec.device.capacity_bytes() / block_bytes);
  fc.internal_op_ratio = spec.op_ratio;
  fc.gc_trigger_free_blocks = spec.ftl_gc_trigger_free_blocks;
  return fc;
}

}  // namespace

const char* scheme_name(SchemeName s) {
  switch (s) {
    case SchemeName::kZCacheLib: return "ZCacheLib";
    case SchemeName::kZnsMiddleLru: return "ZnsMiddleLRU";
    case SchemeName::kZnsMiddleFifo: return "ZnsMiddleFIFO";
    case SchemeName::kZnsDirect: return "ZnsDirect";
    case SchemeName::kRegLru: return "RegLRU";
    case SchemeName::kRegFifo: return "RegFIFO";
  }
  return "unknown";
}

std::optional<SchemeName> parse_scheme_name(std::string_view s) {
  for (SchemeName n : all_schemes()) {
    if (s == scheme_name(n)) {
      return n;
    }
  }
  return std::nullopt;
}

const std::vector<SchemeName>& all_schemes() {
  static const std::vector<SchemeName> names = {
      SchemeName::kZCacheLib, SchemeName::kZnsMiddleLru, SchemeName::kZnsMiddleFifo,
      SchemeName::kZnsDirect, SchemeName::kRegLru,       SchemeName::kRegFifo};
  return names;
}

std::uint32_t cache_regions_for(std::uint64_t device_bytes, double op_ratio,
                                std::uint64_t region_size) {
  if (region_size == 0 || !(op_ratio >= 0.0)) {
    throw Error(Errc::kInvalidConfig, "region size must be positive and op_ratio >= 0");
  }
  const long double usable = static_cast<long double>(device_bytes) / (1.0L + op_ratio);
  return static_cast<std::uint32_t>(std::floor(usable / region_size));
}

std::uint32_t planned_cache_regions(const SchemeSpec& spec) {
  const std::uint64_t rs = spec.effective_region_size();
  if (spec.cache_regions != 0) {
    return spec.cache_regions;
  }
  if (spec.zoned()) {
    return cache_regions_for(spec.device.capacity_bytes(), spec.op_ratio, rs);
  }
  return static_cast<std::uint32_t>(ftl_config_for(spec).exported_bytes() / rs);
}

std::uint64_t SchemeSpec::effective_region_size() const {
  if (region_size != 0) {
    return region_size;
  }
  return name == SchemeName::kZnsDirect ? device.zone_capacity : 16 * zns::kMiB;
}

bool SchemeSpec::zoned() const {
  return name != SchemeName::kRegLru && name != SchemeName::kRegFifo;
}

void SchemeSpec::validate() const {
  device.validate();
  const std::uint64_t rs = effective_region_size();
  if (name == SchemeName::kZnsDirect && rs != device.zone_capacity) {
    throw Error(Errc::kIncompatibleSpec, "ZnsDirect needs region_size == zone_capacity (" +
                                             std::to_string(rs) + " vs " +
                                             std::to_string(device.zone_capacity) + ")");
  }
  if (rs % zns::kPageSize != 0) {
    throw Error(Errc::kIncompatibleSpec, "region_size must be a multiple of 4096");
  }
  if (zoned() && (rs > device.zone_capacity || device.zone_capacity % rs != 0)) {
    throw Error(Errc::kIncompatibleSpec, "zone_capacity must be a multiple of region_size");
  }
  if (!zoned() && (rs % (zns::kPageSize * ftl_pages_per_block)) != 0 &&
      (zns::kPageSize * ftl_pages_per_block) % rs != 0) {
    throw Error(Errc::kIncompatibleSpec, "region_size and erase block size must nest");
  }
  if (!(op_ratio >= 0.0)) {
    throw Error(Errc::kInvalidConfig, "op_ratio must be >= 0");
  }
  if (!(vop_ratio >= 0.0 && vop_ratio <= 1.0)) {
    throw Error(Errc::kInvalidConfig, "vop_ratio must be in [0, 1]");
  }
  if (cache_regions != 0 && cache_regions > device.capacity_bytes() / rs) {
    throw Error(Errc::kInvalidConfig, "cache_regions exceeds the device");
  }
}

Engine::Engine(SchemeSpec spec) : spec_(spec) {
  spec_.validate();
  const std::uint64_t rs = spec_.effective_region_size();
  spec_.region_size = rs;

  cache::CacheConfig cc;
  cc.region_size = rs;
  cc.vop_ratio = spec_.vop_ratio;
  cc.zlru_reorder = spec_.zlru_reorder;
  switch (spec_.name) {
    case SchemeName::kZCacheLib: cc.policy = cache::Policy::kZlru; break;
    case SchemeName::kZnsMiddleFifo:
    case SchemeName::kRegFifo: cc.policy = cache::Policy::kFifo; break;
    default: cc.policy = cache::Policy::kLru; break;
  }

  if (spec_.zoned()) {
    device_ = std::make_unique<zns::Device>(spec_.device);
    zstorage::StorageConfig sc;
    sc.region_size = rs;
    sc.min_write_zones = spec_.min_write_zones;
    sc.max_write_zones = spec_.max_write_zones;
    sc.w_low = spec_.w_low;
    sc.w_high = spec_.w_high;
    if (spec_.name == SchemeName::kZnsDirect) {
      sc.gc_enabled = false;
      sc.reset_when_invalid = true;
    }
    storage_ = std::make_unique<zstorage::ZoneStorage>(*device_, sc);
    backend_ = std::make_unique<ZonedBackend>(*storage_, rs);
    cc.cache_capacity_regions = planned_cache_regions(spec_);
  } else {
    ftl_ = std::make_unique<ftl::Ftl>(ftl_config_for(spec_));
    backend_ = std::make_unique<FtlBackend>(*ftl_, rs);
    cc.cache_capacity_regions = planned_cache_regions(spec_);
  }
  cache_ = std::make_unique<cache::Cache>(cc, *backend_);

  if (spec_.name == SchemeName::kZCacheLib) {
    filter_ = [c = cache_.get()](std::uint64_t vaddr, std::uint32_t zone) {
      return c->zdrop_filter(vaddr, zone);
    };
  } else {
    filter_ = [](std::uint64_t, std::uint32_t) { return zstorage::DropDecision::kMigrate; };
  }
  if (storage_ && spec_.background_gc) {
    storage_->start_background_gc(filter_);
  }
}

Engine::~Engine() {
  try {
    stop();
  } catch (...) {
  }
}

void Engine::stop() {
  if (storage_) {
    storage_->stop_background_gc();
  }
}

void Engine::insert(cache::Key key, std::span<const std::byte> value) {
  cache_->insert(key, value);
  if (!spec_.background_gc) {
    tick_gc();
  }
}

std::optional<std::vector<std::byte>> Engine::lookup(cache::Key key) {
  return cache_->lookup(key);
}

zstorage::GcStats Engine::tick_gc() {
  if (!storage_ || !storage_->gc_needed()) {
    return {};
  }
  return storage_->gc_cycle(filter_);
}

void Engine::set_gc_observer(zstorage::GcObserver observer) {
  if (storage_) {
    storage_->set_gc_observer(std::move(observer));
  }
}

EngineMetrics Engine::metrics() const {
  EngineMetrics m;
  m.cache = cache_->stats();
  if (storage_) {
    const zstorage::StorageCounters c = storage_->counters();
    m.cache_bytes_written = c.region_bytes_written;
    m.device_bytes_written = device_->total_appended_bytes();
    m.gc_migrated_bytes = c.gc_migrated_bytes;
    m.device_read_bytes = device_->total_read_bytes();
    m.gc_read_bytes = c.gc_read_bytes;
    m.gc_cycles = c.gc_cycles;
    m.zone_resets = c.zones_reclaimed + c.eager_resets;
    m.empty_zones = storage_->empty_zone_count();
  } else {
    const ftl::FtlCounters c = ftl_->counters();
    m.cache_bytes_written = c.host_bytes_written;
    m.device_bytes_written = c.nand_bytes_written;
    m.gc_migrated_bytes = c.migrated_bytes;
    m.device_read_bytes = c.read_bytes + c.migrated_bytes;
    m.gc_read_bytes = c.migrated_bytes;
    m.ftl_gc_invocations = c.gc_invocations;
    m.empty_zones = ftl_->free_block_count();
  }
  if (m.cache_bytes_written != 0) {
    m.wa_factor = static_cast<double>(m.device_bytes_written) /
                  static_cast<double>(m.cache_bytes_written);
  }
  return m;
}

void Engine::check_consistency() const {
  cache_->check_consistency();
  if (storage_) {
    storage_->check_consistency();
  } else {
    ftl_->check_consistency();
  }
}

std::unique_ptr<Engine> build(const SchemeSpec& spec) { return std::make_unique<Engine>(spec); }

}  // namespace zcs::schemes
