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
#include <numeric>
#include <string>

#include "zcs/error.h"
#include "zcs/workload/payload.h"

namespace zcs::workload {

void WorkloadSpec::validate(std::uint64_t region_size) const {
  auto bad = [](const std::string& what) { throw Error(Errc::kInvalidSpec, what); };
  if (!(get_ratio >= 0.0 && get_ratio <= 1.0)) {
    bad("get_ratio must be in [0, 1]");
  }
  if (op_count < 1) {
    bad("op_count must be at least 1");
  }
  if (key_space < 1) {
    bad("key_space must be at least 1");
  }
  if (!(zipf_alpha >= 0.0)) {
    bad("zipf_alpha must be >= 0");
  }
  if (object_size_min < 1 || object_size_min > object_size_max) {
    bad("object sizes must satisfy 1 <= min <= max");
  }
  if (region_size != 0 && object_size_max > region_size) {
    bad("object_size_max " + std::to_string(object_size_max) + " exceeds the region size " +
        std::to_string(region_size));
  }
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"l2_wc", "l2_reg", "flat"};
  return names;
}

double mean_object_size(std::uint64_t lo, std::uint64_t hi) {
  if (lo == hi) {
    return static_cast<double>(lo);
  }
  return static_cast<double>(hi - lo) / std::log(static_cast<double>(hi) / lo);
}

std::optional<WorkloadSpec> preset(std::string_view name, std::uint64_t cache_bytes) {
  WorkloadSpec s;
  if (name == "l2_wc") {
    s.get_ratio = 0.60;
  } else if (name == "l2_reg") {
    s.get_ratio = 0.88;
  } else if (name == "flat") {
    s.get_ratio = 0.985;
  } else {
    return std::nullopt;
  }
  s.name = std::string(name);
  s.independent_set_keys = true;
  const double mean = mean_object_size(s.object_size_min, s.object_size_max);
  s.key_space = static_cast<std::uint64_t>(std::ceil(1.5 * cache_bytes / mean));
  // Writes come from sets plus fills after misses; assume about one get in ten misses.
  const double writes_per_op = (1.0 - s.get_ratio) + 0.1 * s.get_ratio;
  s.op_count = static_cast<std::uint64_t>(std::ceil(2.5 * cache_bytes / mean / writes_per_op));
  return s;
}

std::uint64_t object_size(std::uint64_t key, std::uint64_t seed, std::uint64_t lo,
                          std::uint64_t hi) {
  if (lo >= hi) {
    return lo;
  }
  const double u = static_cast<double>(mix64(key ^ mix64(seed)) >> 11) * 0x1.0p-53;
  const double v = std::exp(std::log(static_cast<double>(lo)) +
                            u * (std::log(static_cast<double>(hi)) - std::log(static_cast<double>(lo))));
  return std::clamp<std::uint64_t>(static_cast<std::uint64_t>(v), lo, hi);
}

double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

ZipfSampler::ZipfSampler(std::uint64_t n, double alpha) : cdf_(n) {
  double acc = 0;
  for (std::uint64_t r = 0; r < n; ++r) {
    acc += alpha == 0.0 ? 1.0 : std::pow(static_cast<double>(r + 1), -alpha);
    cdf_[r] = acc;
  }
  for (double& c : cdf_) {
    c /= acc;
  }
  cdf_.back() = 1.0;
}

std::uint64_t ZipfSampler::operator()(std::mt19937_64& rng) const {
  const double u = unit_double(rng);
  return static_cast<std::uint64_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
}

Generator::Generator(WorkloadSpec spec)
    : spec_((spec.validate(), std::move(spec))),
      rng_(spec_.seed),
      zipf_(spec_.key_space, spec_.zipf_alpha) {
  if (spec_.independent_set_keys && spec_.key_space > 1) {
    // An affine map r -> (r * stride + offset) mod n with gcd(stride, n) == 1
    // is a bijection on ranks; a stride near n/phi spreads neighbours apart.
    const std::uint64_t n = spec_.key_space;
    std::uint64_t stride = static_cast<std::uint64_t>(static_cast<double>(n) * 0.6180339887) | 1;
    while (std::gcd(stride, n) != 1) {
      stride += 2;
    }
    set_stride_ = stride % n;
    set_offset_ = mix64(spec_.seed) % n;
  }
}

bool Generator::next(CacheOp& op) {
  if (emitted_ >= spec_.op_count) {
    return false;
  }
  ++emitted_;
  op.kind = unit_double(rng_) < spec_.get_ratio ? OpKind::kGet : OpKind::kSet;
  op.key = zipf_(rng_);
  if (op.kind == OpKind::kSet && spec_.independent_set_keys) {
    op.key = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(op.key) * set_stride_ + set_offset_) % spec_.key_space);
  }
  op.size = object_size(op.key, spec_.seed, spec_.object_size_min, spec_.object_size_max);
  return true;
}

std::vector<CacheOp> Generator::take_all() {
  std::vector<CacheOp> ops;
  ops.reserve(spec_.op_count - emitted_);
  CacheOp op;
  while (next(op)) {
    ops.push_back(op);
  }
  return ops;
}

}  // namespace zcs::workload
