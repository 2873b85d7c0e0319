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

#include <string>

#include "zcs/error.h"

namespace zcs::zstorage {

OpPlan compute_min_op(double t_cache, double t_gc, double k) {
  if (!(t_cache > 0) || !(t_gc > 0)) {
    throw Error(Errc::kInvalidConfig, "rates must be positive");
  }
  if (!(k >= 1)) {
    throw Error(Errc::kInvalidConfig, "k must be >= 1, got " + std::to_string(k));
  }
  const double denom = k * t_gc - t_cache;
  if (denom <= 0) {
    throw Error(Errc::kInfeasibleRates, "GC reclaims " + std::to_string(k * t_gc) +
                                            " but the cache writes " + std::to_string(t_cache));
  }
  OpPlan plan{t_cache, t_gc, k, 0, 0};
  plan.r_op = t_cache / denom;
  plan.r_invalid = plan.r_op / (1 + plan.r_op);
  return plan;
}

}  // namespace zcs::zstorage
