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
#include <istream>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace zcs::workload {

struct WorkloadSpec {
  std::string name = "l2_wc";
  double get_ratio = 0.60;
  std::uint64_t key_space = 100000;
  double zipf_alpha = 1.0;
  std::uint64_t object_size_min = 2048;
  std::uint64_t object_size_max = 256 * 1024;
  std::uint64_t op_count = 100000;
  std::uint64_t seed = 1;
  // Sets rank keys by their own zipf permutation instead of sharing the
  // gets' popularity order.
  bool independent_set_keys = false;

  // Throws kInvalidSpec. A non-zero `region_size` also bounds object sizes.
  void validate(std::uint64_t region_size = 0) const;
};

// Preset names: l2_wc, l2_reg, flat. Key space is sized so the working set
// is about 1.5x `cache_bytes`, and op_count so that roughly 2.5x
// `cache_bytes` gets written.
std::optional<WorkloadSpec> preset(std::string_view name, std::uint64_t cache_bytes);
const std::vector<std::string>& preset_names();

// Mean of the log-uniform size distribution on [lo, hi].
double mean_object_size(std::uint64_t lo, std::uint64_t hi);

// Size of `key` in a run seeded with `seed`; fixed for the whole run.
std::uint64_t object_size(std::uint64_t key, std::uint64_t seed, std::uint64_t lo,
                          std::uint64_t hi);

enum class OpKind { kGet, kSet };

struct CacheOp {
  OpKind kind = OpKind::kGet;
  std::uint64_t key = 0;
  // Object size. Gets carry it too so a miss can be filled; 0 if unknown.
  std::uint64_t size = 0;

  bool operator==(const CacheOp&) const = default;
};

// Uniform double in [0, 1) from the top 53 bits of one engine draw.
double unit_double(std::mt19937_64& rng);

// Samples ranks 0..n-1 with P(r) proportional to 1/(r+1)^alpha.
class ZipfSampler {
 public:
  ZipfSampler(std::uint64_t n, double alpha);
  std::uint64_t operator()(std::mt19937_64& rng) const;

 private:
  std::vector<double> cdf_;
};

class Generator {
 public:
  explicit Generator(WorkloadSpec spec);

  const WorkloadSpec& spec() const { return spec_; }
  std::uint64_t emitted() const { return emitted_; }

  // False once op_count operations have been produced.
  bool next(CacheOp& op);
  std::vector<CacheOp> take_all();

 private:
  WorkloadSpec spec_;
  std::mt19937_64 rng_;
  ZipfSampler zipf_;
  std::uint64_t emitted_ = 0;
  std::uint64_t set_stride_ = 1;
  std::uint64_t set_offset_ = 0;
};

// Trace lines: `set <key> <size>` or `get <key>`; `#` starts a comment line.
// Key tokens are numbered in order of first appearance. Gets inherit the
// size of the key's latest set.
std::vector<CacheOp> parse_trace(std::istream& in);
std::vector<CacheOp> read_trace(const std::string& path);
void write_trace(const std::string& path, const std::vector<CacheOp>& ops);

}  // namespace zcs::workload
