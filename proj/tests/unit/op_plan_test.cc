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

#include "zcs/zstorage/op_plan.h"

#include <random>

#include "gtest_support.h"

namespace zcs::zstorage {
namespace {

TEST(OpPlan, KnownPoints) {
  const OpPlan a = compute_min_op(200, 600, 6);
  EXPECT_NEAR(a.r_op, 200.0 / 3400.0, 1e-12);
  EXPECT_GE(a.r_op, 0.057);
  EXPECT_LE(a.r_op, 0.060);
  const OpPlan b = compute_min_op(100, 1000, 1);
  EXPECT_NEAR(b.r_op, 0.1111, 1e-4);
}

TEST(OpPlan, Infeasible) {
  EXPECT_ERRC(compute_min_op(600, 100, 1), Errc::kInfeasibleRates);
  EXPECT_ERRC(compute_min_op(600, 100, 6), Errc::kInfeasibleRates);
  EXPECT_ERRC(compute_min_op(0, 100, 6), Errc::kInvalidConfig);
  EXPECT_ERRC(compute_min_op(10, 100, 0.5), Errc::kInvalidConfig);
}

TEST(OpPlan, RandomRatesSatisfyDefinition) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> rate(1, 2000), skew(1, 10);
  for (int i = 0; i < 2000; ++i) {
    const double tc = rate(rng), tg = rate(rng), k = skew(rng);
    if (k * tg <= tc) {
      EXPECT_ERRC(compute_min_op(tc, tg, k), Errc::kInfeasibleRates);
      continue;
    }
    const OpPlan p = compute_min_op(tc, tg, k);
    ASSERT_GT(p.r_op, 0);
    ASSERT_NEAR(p.r_invalid, p.r_op / (1 + p.r_op), 1e-12);
    ASSERT_NEAR(p.r_op * (k * tg - tc), tc, tc * 1e-9);
  }
}

TEST(OpPlan, MonotoneInRates) {
  double prev = 0;
  for (double tc = 10; tc < 500; tc += 10) {
    const double r = compute_min_op(tc, 600, 1).r_op;
    EXPECT_GT(r, prev);
    prev = r;
  }
}

}  // namespace
}  // namespace zcs::zstorage
