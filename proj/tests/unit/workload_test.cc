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

#include "zcs/workload/workload.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <random>

#include "gtest_support.h"
#include "zcs/workload/payload.h"

namespace zcs::workload {
namespace {

WorkloadSpec gets_only(std::uint64_t keys, double alpha, std::uint64_t ops) {
  WorkloadSpec s;
  s.get_ratio = 1.0;
  s.key_space = keys;
  s.zipf_alpha = alpha;
  s.op_count = ops;
  s.seed = 17;
  return s;
}

std::vector<std::uint64_t> key_counts(const WorkloadSpec& s) {
  std::vector<std::uint64_t> counts(s.key_space, 0);
  Generator g(s);
  CacheOp op;
  while (g.next(op)) {
    ++counts.at(op.key);
  }
  return counts;
}

TEST(Workload, Presets) {
  const std::uint64_t cache = 1ull << 30;
  EXPECT_DOUBLE_EQ(preset("l2_wc", cache)->get_ratio, 0.60);
  EXPECT_DOUBLE_EQ(preset("l2_reg", cache)->get_ratio, 0.88);
  EXPECT_DOUBLE_EQ(preset("flat", cache)->get_ratio, 0.985);
  EXPECT_FALSE(preset("l1", cache).has_value());
  EXPECT_EQ(preset_names().size(), 3u);
  const WorkloadSpec s = *preset("l2_wc", cache);
  // Log-uniform mean over [lo, hi] is (hi - lo) / ln(hi / lo).
  const double mean = (256.0 * 1024 - 2048) / std::log(128.0);
  EXPECT_NEAR(mean_object_size(2048, 256 * 1024), mean, 1e-6 * mean);
  EXPECT_EQ(s.key_space, static_cast<std::uint64_t>(std::ceil(1.5 * cache / mean)));
  EXPECT_DOUBLE_EQ(s.zipf_alpha, 1.0);
  s.validate(16 << 20);
}

TEST(Workload, Validation) {
  WorkloadSpec s;
  s.get_ratio = 1.5;
  EXPECT_ERRC(s.validate(), Errc::kInvalidSpec);
  s = WorkloadSpec{};
  s.op_count = 0;
  EXPECT_ERRC(s.validate(), Errc::kInvalidSpec);
  s = WorkloadSpec{};
  s.object_size_min = 4096;
  s.object_size_max = 1024;
  EXPECT_ERRC(s.validate(), Errc::kInvalidSpec);
  s = WorkloadSpec{};
  EXPECT_ERRC(s.validate(64 * 1024), Errc::kInvalidSpec);
  s.zipf_alpha = -1;
  EXPECT_ERRC(s.validate(), Errc::kInvalidSpec);
  s = WorkloadSpec{};
  s.key_space = 0;
  EXPECT_ERRC(Generator{s}, Errc::kInvalidSpec);
}

TEST(Workload, SameSeedSameStream) {
  WorkloadSpec s;
  s.op_count = 20000;
  s.independent_set_keys = true;
  EXPECT_EQ(Generator(s).take_all(), Generator(s).take_all());
  WorkloadSpec t = s;
  t.seed = 2;
  EXPECT_NE(Generator(s).take_all(), Generator(t).take_all());
}

TEST(Workload, StreamStopsAtOpCount) {
  WorkloadSpec s;
  s.op_count = 10;
  Generator g(s);
  EXPECT_EQ(g.take_all().size(), 10u);
  CacheOp op;
  EXPECT_FALSE(g.next(op));
  EXPECT_EQ(g.emitted(), 10u);
}

TEST(Workload, AlphaZeroIsUniform) {
  const WorkloadSpec s = gets_only(50, 0.0, 200000);
  const double p = 1.0 / 50, n = 200000;
  const double sigma = std::sqrt(n * p * (1 - p));
  for (std::uint64_t c : key_counts(s)) {
    EXPECT_NEAR(static_cast<double>(c), n * p, 3.5 * sigma);
  }
}

TEST(Workload, ZipfMatchesPmfOnSmallSupport) {
  const WorkloadSpec s = gets_only(5, 1.0, 300000);
  const double h = 1 + 1 / 2.0 + 1 / 3.0 + 1 / 4.0 + 1 / 5.0;
  const auto counts = key_counts(s);
  for (std::uint64_t r = 0; r < 5; ++r) {
    const double p = 1.0 / static_cast<double>(r + 1) / h;
    const double sigma = std::sqrt(3e5 * p * (1 - p));
    EXPECT_NEAR(static_cast<double>(counts[r]), 3e5 * p, 4 * sigma) << r;
  }
}

TEST(Workload, RankFrequencySlopeNearMinusOne) {
  auto counts = key_counts(gets_only(2000, 1.0, 1000000));
  std::sort(counts.rbegin(), counts.rend());
  // Least squares on log(rank), log(count) over the top 200 ranks.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = 200;
  for (int r = 0; r < n; ++r) {
    const double x = std::log(r + 1.0), y = std::log(static_cast<double>(counts[r]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  EXPECT_NEAR(slope, -1.0, 0.1);
}

TEST(Workload, GetRatioHolds) {
  WorkloadSpec s;
  s.get_ratio = 0.6;
  s.op_count = 100000;
  std::uint64_t gets = 0;
  for (const CacheOp& op : Generator(s).take_all()) {
    gets += op.kind == OpKind::kGet;
  }
  const double sigma = std::sqrt(1e5 * 0.6 * 0.4);
  EXPECT_NEAR(static_cast<double>(gets), 6e4, 4 * sigma);
}

TEST(Workload, EachKeyHasOneSize) {
  for (bool independent : {false, true}) {
    WorkloadSpec s;
    s.op_count = 50000;
    s.key_space = 3000;
    s.independent_set_keys = independent;
    std::map<std::uint64_t, std::uint64_t> size_of;
    for (const CacheOp& op : Generator(s).take_all()) {
      ASSERT_GE(op.size, s.object_size_min);
      ASSERT_LE(op.size, s.object_size_max);
      ASSERT_LT(op.key, s.key_space);
      auto [it, fresh] = size_of.emplace(op.key, op.size);
      ASSERT_EQ(it->second, op.size) << op.key;
    }
  }
}

TEST(Workload, IndependentSetKeysArePermutedRanks) {
  WorkloadSpec s = gets_only(1000, 1.0, 200000);
  s.get_ratio = 0.0;
  s.independent_set_keys = true;
  auto counts = key_counts(s);
  // Still zipf shaped after sorting, but the most written key is not rank 0.
  const auto top = std::max_element(counts.begin(), counts.end()) - counts.begin();
  EXPECT_NE(top, 0);
  std::sort(counts.rbegin(), counts.rend());
  EXPECT_NEAR(static_cast<double>(counts[0]) / static_cast<double>(counts[1]), 2.0, 0.15);
}

TEST(Workload, SizesAreLogUniform) {
  // Median of log-uniform sizes is the geometric mean of the bounds.
  std::vector<std::uint64_t> sizes;
  for (std::uint64_t k = 0; k < 20001; ++k) {
    sizes.push_back(object_size(k, 5, 2048, 262144));
  }
  std::nth_element(sizes.begin(), sizes.begin() + 10000, sizes.end());
  EXPECT_NEAR(static_cast<double>(sizes[10000]), std::sqrt(2048.0 * 262144.0), 0.05 * 23170);
  EXPECT_EQ(object_size(1, 1, 4096, 4096), 4096u);
}

TEST(Payload, RoundTripAndTamperDetection) {
  auto p = make_payload(7, 3, 10000);
  EXPECT_TRUE(verify_payload(7, 3, p));
  EXPECT_FALSE(verify_payload(7, 4, p));
  EXPECT_FALSE(verify_payload(8, 3, p));
  p[9999] ^= std::byte{1};
  EXPECT_FALSE(verify_payload(7, 3, p));
  p[9999] ^= std::byte{1};
  p[4096] ^= std::byte{1};
  EXPECT_FALSE(verify_payload(7, 3, p));
}

TEST(Payload, PagesAreUniformWords) {
  const auto p = make_payload(11, 2, 3 * 4096);
  for (std::uint64_t page = 0; page < 3; ++page) {
    std::uint64_t w;
    std::memcpy(&w, p.data() + page * 4096 + 8 * 100, 8);
    EXPECT_EQ(w, payload_word(11, 2, page));
  }
  EXPECT_NE(payload_word(11, 2, 0), payload_word(11, 2, 1));
}

}  // namespace
}  // namespace zcs::workload
