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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zcs/cache/cache.h"
#include "zcs/ftl/ftl.h"
#include "zcs/zns/device.h"
#include "zcs/zstorage/zone_storage.h"

namespace zcs::schemes {

enum class SchemeName { kZCacheLib, kZnsMiddleLru, kZnsMiddleFifo, kZnsDirect, kRegLru, kRegFifo };

const char* scheme_name(SchemeName s);
std::optional<SchemeName> parse_scheme_name(std::string_view s);
const std::vector<SchemeName>& all_schemes();

struct SchemeSpec {
  SchemeName name = SchemeName::kZCacheLib;
  // Geometry of the emulated SSD. Reg schemes use the same raw capacity.
  zns::DeviceConfig device;
  // Reserved space divided by cache space.
  double op_ratio = 0.07;
  // 0 picks the scheme default: the zone capacity for ZnsDirect, 16 MiB otherwise.
  std::uint64_t region_size = 0;
  // 0 derives the slot count from op_ratio.
  std::uint32_t cache_regions = 0;
  double vop_ratio = 1.0;
  bool zlru_reorder = true;
  std::uint32_t min_write_zones = 4;
  std::uint32_t max_write_zones = 0;
  double w_low = 1.0;
  double w_high = 3.0;
  // Run zone GC on its own thread instead of after each insert.
  bool background_gc = false;
  std::uint32_t ftl_pages_per_block = 256;
  std::uint32_t ftl_gc_trigger_free_blocks = 2;

  std::uint64_t effective_region_size() const;
  bool zoned() const;
  void validate() const;
};

// Region slots that fit in `device_bytes` once `op_ratio` of the cache size
// is held back: floor(device_bytes / (1 + op_ratio) / region_size).
std::uint32_t cache_regions_for(std::uint64_t device_bytes, double op_ratio,
                                std::uint64_t region_size);

// Cache slots `spec` will get: explicit cache_regions, else derived from the
// OP ratio (zoned) or from the FTL's exported capacity (Reg).
std::uint32_t planned_cache_regions(const SchemeSpec& spec);

struct EngineMetrics {
  std::uint64_t cache_bytes_written = 0;
  std::uint64_t device_bytes_written = 0;
  std::uint64_t gc_migrated_bytes = 0;
  // Every flash read, GC copies included.
  std::uint64_t device_read_bytes = 0;
  std::uint64_t gc_read_bytes = 0;
  std::uint64_t gc_cycles = 0;
  std::uint64_t zone_resets = 0;
  std::uint64_t ftl_gc_invocations = 0;
  // Empty zones for zoned schemes, free erase blocks for Reg schemes.
  std::uint32_t empty_zones = 0;
  double wa_factor = 1.0;
  cache::CacheStats cache;
};

// One fully wired scheme: cache over either zone storage or an FTL.
class Engine {
 public:
  explicit Engine(SchemeSpec spec);
  ~Engine();

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  const SchemeSpec& spec() const { return spec_; }
  std::uint32_t cache_regions() const { return cache_->config().cache_capacity_regions; }

  // Inserts and, unless GC runs in the background, runs a GC cycle if the
  // low watermark was crossed.
  void insert(cache::Key key, std::span<const std::byte> value);
  std::optional<std::vector<std::byte>> lookup(cache::Key key);
  zstorage::GcStats tick_gc();

  EngineMetrics metrics() const;
  double wa_factor() const { return metrics().wa_factor; }

  cache::Cache& cache() { return *cache_; }
  const cache::Cache& cache() const { return *cache_; }
  // Null for Reg schemes.
  zstorage::ZoneStorage* storage() { return storage_.get(); }
  const zstorage::ZoneStorage* storage() const { return storage_.get(); }
  zns::Device* device() { return device_.get(); }
  const zns::Device* device() const { return device_.get(); }
  // Null for zoned schemes.
  ftl::Ftl* ftl() { return ftl_.get(); }
  const ftl::Ftl* ftl() const { return ftl_.get(); }

  void set_gc_observer(zstorage::GcObserver observer);
  // Stops background GC, rethrowing anything it failed with.
  void stop();
  void check_consistency() const;

 private:
  SchemeSpec spec_;
  std::unique_ptr<zns::Device> device_;
  std::unique_ptr<zstorage::ZoneStorage> storage_;
  std::unique_ptr<ftl::Ftl> ftl_;
  std::unique_ptr<cache::RegionDevice> backend_;
  std::unique_ptr<cache::Cache> cache_;
  zstorage::DropFilter filter_;
};

std::unique_ptr<Engine> build(const SchemeSpec& spec);

}  // namespace zcs::schemes
