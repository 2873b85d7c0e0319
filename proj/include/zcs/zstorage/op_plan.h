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

namespace zcs::zstorage {

// Minimum over-provisioning for a cache written at `t_cache` while GC cleans
// at `t_gc`, when the victim zone holds `k` times the average invalid ratio.
struct OpPlan {
  double t_cache = 0;
  double t_gc = 0;
  double k = 1;
  double r_op = 0;
  double r_invalid = 0;
};

// Throws kInfeasibleRates when k * t_gc <= t_cache, kInvalidConfig when a rate
// is non-positive or k < 1.
OpPlan compute_min_op(double t_cache, double t_gc, double k);

}  // namespace zcs::zstorage
