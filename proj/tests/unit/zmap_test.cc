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

#include <map>
#include <random>

#include "gtest_support.h"

namespace zcs::zstorage {
namespace {

constexpr std::uint64_t kZone = 1 << 20;
constexpr std::uint64_t kRegion = 128 << 10;

TEST(ZMap, PairsBothDirections) {
  ZMap m(4, kZone, kRegion);
  EXPECT_FALSE(m.assign(131072, 1048576).has_value());
  EXPECT_EQ(m.lookup(131072), 1048576u);
  EXPECT_EQ(m.reverse_lookup(1048576), 131072u);
  EXPECT_EQ(m.valid_regions(1), 1u);
  EXPECT_EQ(m.valid_bytes(1), kRegion);
  m.check_consistency();
}

TEST(ZMap, ReassignReturnsOldAndMovesStats) {
  ZMap m(4, kZone, kRegion);
  m.assign(0, 0);
  EXPECT_EQ(m.assign(0, 2 * kZone), 0u);
  EXPECT_EQ(m.valid_regions(0), 0u);
  EXPECT_EQ(m.valid_regions(2), 1u);
  EXPECT_FALSE(m.reverse_lookup(0).has_value());
  EXPECT_EQ(m.erase(0), 2 * kZone);
  EXPECT_FALSE(m.erase(0).has_value());
  EXPECT_EQ(m.size(), 0u);
}

TEST(ZMap, DoubleMappedPhysicalRejectedWithoutSideEffects) {
  ZMap m(2, kZone, kRegion);
  m.assign(0, 0);
  m.assign(kRegion, kRegion);
  EXPECT_ERRC(m.assign(kRegion, 0), Errc::kInvalidConfig);
  EXPECT_EQ(m.lookup(kRegion), kRegion);
  m.check_consistency();
}

TEST(ZMap, ZoneEntriesAscending) {
  ZMap m(2, kZone, kRegion);
  m.assign(5 * kRegion, kZone + 3 * kRegion);
  m.assign(1 * kRegion, kZone + 0 * kRegion);
  m.assign(9 * kRegion, kZone + 1 * kRegion);
  auto e = m.zone_entries(1);
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[0].second, 1 * kRegion);
  EXPECT_EQ(e[1].second, 9 * kRegion);
  EXPECT_EQ(e[2].second, 5 * kRegion);
}

TEST(ZMap, RandomInterleavingStaysBijective) {
  const std::uint32_t zones = 6;
  const std::uint64_t per_zone = kZone / kRegion;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    ZMap m(zones, kZone, kRegion);
    std::map<std::uint64_t, std::uint64_t> fwd, rev;
    for (int step = 0; step < 2000; ++step) {
      const std::uint64_t v = (rng() % 40) * kRegion;
      if (rng() % 3 == 0) {
        auto got = m.erase(v);
        auto it = fwd.find(v);
        ASSERT_EQ(got.has_value(), it != fwd.end());
        if (it != fwd.end()) {
          ASSERT_EQ(*got, it->second);
          rev.erase(it->second);
          fwd.erase(it);
        }
      } else {
        const std::uint64_t p = (rng() % (zones * per_zone)) * kRegion;
        if (rev.count(p) != 0) {
          EXPECT_ERRC(m.assign(v, p), Errc::kInvalidConfig);
        } else {
          auto old = m.assign(v, p);
          auto it = fwd.find(v);
          ASSERT_EQ(old.has_value(), it != fwd.end());
          if (it != fwd.end()) {
            rev.erase(it->second);
          }
          fwd[v] = p;
          rev[p] = v;
        }
      }
      for (const auto& [virt, phys] : m.forward()) {
        ASSERT_EQ(m.reverse_lookup(phys), virt);
      }
      ASSERT_EQ(m.forward().size(), fwd.size());
      std::vector<std::uint32_t> counts(zones, 0);
      for (const auto& [phys, virt] : rev) {
        ASSERT_EQ(m.lookup(virt), phys);
        ++counts[phys / kZone];
      }
      for (std::uint32_t z = 0; z < zones; ++z) {
        ASSERT_EQ(m.valid_regions(z), counts[z]);
      }
    }
    m.check_consistency();
  }
}

}  // namespace
}  // namespace zcs::zstorage
