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

#include <random>

#include "gtest_support.h"
#include "test_support.h"
#include "zcs/workload/payload.h"
#include "zcs/workload/workload.h"

namespace zcs::schemes {
namespace {

constexpr std::uint64_t kMiB = zns::kMiB;

SchemeSpec small_spec(SchemeName name, std::uint64_t region = 1 * kMiB) {
  SchemeSpec s;
  s.name = name;
  s.device = testing::small_device(64, 16 * kMiB, 14);
  s.region_size = name == SchemeName::kZnsDirect ? 0 : region;
  s.ftl_pages_per_block = 64;
  return s;
}

struct DriveResult {
  std::vector<bool> hits;
  std::uint64_t corruptions = 0;
};

// Look-aside traffic: zipf gets, each miss filled with a fixed-size item,
// until `bytes` of items have been inserted.
DriveResult drive(Engine& e, std::uint64_t bytes, std::uint64_t seed,
                  std::uint64_t item = 64 * 1024) {
  const std::uint64_t keys = 3 * e.cache_regions() * (e.spec().region_size / item) / 2 + 16;
  workload::ZipfSampler zipf(keys, 0.9);
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> version(keys, 0);
  DriveResult r;
  std::uint64_t inserted = 0;
  while (inserted < bytes) {
    const std::uint64_t k = zipf(rng);
    auto got = e.lookup(k);
    r.hits.push_back(got.has_value());
    if (got) {
      r.corruptions += !workload::verify_payload(k, version[k], *got);
    } else {
      ++version[k];
      e.insert(k, workload::make_payload(k, version[k], item));
      inserted += item;
    }
  }
  return r;
}

TEST(SchemeSpec, DirectNeedsZoneSizedRegions) {
  SchemeSpec s = small_spec(SchemeName::kZnsDirect);
  s.region_size = 4 * kMiB;
  EXPECT_ERRC(Engine{s}, Errc::kIncompatibleSpec);
  SchemeSpec m = small_spec(SchemeName::kZnsMiddleLru, 3 * kMiB);
  EXPECT_ERRC(Engine{m}, Errc::kIncompatibleSpec);
}

TEST(SchemeSpec, Names) {
  for (SchemeName n : all_schemes()) {
    EXPECT_EQ(parse_scheme_name(scheme_name(n)), n);
  }
  EXPECT_FALSE(parse_scheme_name("zns-f2fs").has_value());
  EXPECT_EQ(all_schemes().size(), 6u);
}

TEST(SchemeSpec, CapacityFromOpRatio) {
  // 64 MiB zones x 64 over 1.07, in 16 MiB regions.
  EXPECT_EQ(cache_regions_for(64ull * 64 * kMiB, 0.07, 16 * kMiB), 239u);
  EXPECT_EQ(cache_regions_for(64ull * 64 * kMiB, 0.0, 16 * kMiB), 256u);
}

TEST(Engine, ZCacheLibDefaults) {
  SchemeSpec s;
  s.device = testing::small_device(64, 64 * kMiB, 14);
  Engine e(s);
  EXPECT_EQ(e.cache().config().policy, cache::Policy::kZlru);
  EXPECT_DOUBLE_EQ(e.cache().config().vop_ratio, 1.0);
  EXPECT_EQ(e.cache().config().region_size, 16 * kMiB);
  EXPECT_DOUBLE_EQ(e.storage()->config().w_low, 1.0);
  EXPECT_DOUBLE_EQ(e.storage()->config().w_high, 3.0);
  EXPECT_EQ(e.cache_regions(), 239u);
  EXPECT_EQ(e.ftl(), nullptr);
}

TEST(Engine, PoliciesPerScheme) {
  EXPECT_EQ(Engine(small_spec(SchemeName::kZnsMiddleLru)).cache().config().policy,
            cache::Policy::kLru);
  EXPECT_EQ(Engine(small_spec(SchemeName::kZnsMiddleFifo)).cache().config().policy,
            cache::Policy::kFifo);
  EXPECT_EQ(Engine(small_spec(SchemeName::kRegFifo)).cache().config().policy,
            cache::Policy::kFifo);
  Engine reg(small_spec(SchemeName::kRegLru));
  EXPECT_EQ(reg.cache().config().policy, cache::Policy::kLru);
  EXPECT_NE(reg.ftl(), nullptr);
  EXPECT_EQ(reg.storage(), nullptr);
}

TEST(Engine, WaIsOneBeforeAnyGc) {
  for (SchemeName n : all_schemes()) {
    Engine e(small_spec(n));
    drive(e, 256 * kMiB, 3);
    const EngineMetrics m = e.metrics();
    ASSERT_EQ(m.gc_cycles + m.ftl_gc_invocations, 0u) << scheme_name(n);
    EXPECT_EQ(m.wa_factor, 1.0) << scheme_name(n);
    EXPECT_EQ(m.device_bytes_written, m.cache_bytes_written);
  }
}

TEST(Engine, DirectNeverCollects) {
  Engine e(small_spec(SchemeName::kZnsDirect));
  const DriveResult r = drive(e, 3 * 1024 * kMiB, 5, 256 * 1024);
  const EngineMetrics m = e.metrics();
  EXPECT_EQ(m.gc_cycles, 0u);
  EXPECT_EQ(m.gc_migrated_bytes, 0u);
  EXPECT_EQ(m.wa_factor, 1.0);
  EXPECT_GT(m.zone_resets, 0u);
  EXPECT_EQ(r.corruptions, 0u);
  e.check_consistency();
}

TEST(Engine, MiddleLruAmplifiesZCacheLibDoesNot) {
  const std::uint64_t two_devices = 2 * 64 * 16 * kMiB;
  Engine mid(small_spec(SchemeName::kZnsMiddleLru, 4 * kMiB));
  Engine zcl(small_spec(SchemeName::kZCacheLib, 4 * kMiB));
  const DriveResult rm = drive(mid, two_devices, 11);
  const DriveResult rz = drive(zcl, two_devices, 11);
  EXPECT_GE(mid.wa_factor(), 1.5);
  EXPECT_LE(mid.wa_factor(), 3.0);
  EXPECT_LE(zcl.wa_factor(), 1.05);
  EXPECT_GT(zcl.metrics().gc_cycles, 0u);
  EXPECT_EQ(rm.corruptions + rz.corruptions, 0u);
  const EngineMetrics m = mid.metrics();
  EXPECT_EQ(m.device_bytes_written, m.cache_bytes_written + m.gc_migrated_bytes);
  mid.check_consistency();
  zcl.check_consistency();
}

TEST(Engine, RegFifoSequentialRegionsHaveUnitWa) {
  Engine e(small_spec(SchemeName::kRegFifo));
  std::uint64_t k = 0;
  const std::uint64_t item = 256 * 1024;
  const std::uint64_t capacity = e.ftl()->exported_bytes();
  for (std::uint64_t written = 0; written < 3 * capacity; written += item, ++k) {
    e.insert(k, workload::make_payload(k, 1, item));
  }
  EXPECT_GT(e.metrics().ftl_gc_invocations, 0u);
  EXPECT_NEAR(e.wa_factor(), 1.0, 0.01);
}

TEST(Engine, RegAndMiddleLruShareHitSequence) {
  Engine reg(small_spec(SchemeName::kRegLru));
  SchemeSpec ms = small_spec(SchemeName::kZnsMiddleLru);
  ms.cache_regions = reg.cache_regions();
  Engine mid(ms);
  const DriveResult a = drive(reg, 1024 * kMiB, 21);
  const DriveResult b = drive(mid, 1024 * kMiB, 21);
  EXPECT_EQ(a.hits, b.hits);
}

TEST(Engine, BackgroundGcMatchesDataIntegrity) {
  SchemeSpec s = small_spec(SchemeName::kZCacheLib);
  s.background_gc = true;
  Engine e(s);
  const DriveResult r = drive(e, 2 * 64 * 16 * kMiB, 8);
  e.stop();
  EXPECT_EQ(r.corruptions, 0u);
  EXPECT_GT(e.metrics().gc_cycles, 0u);
  e.check_consistency();
}

}  // namespace
}  // namespace zcs::schemes
