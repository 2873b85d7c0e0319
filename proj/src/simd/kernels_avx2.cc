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

#include <immintrin.h>

#include <cstring>

#include "zcs/simd/kernels.h"

namespace zcs::simd::avx2 {

std::optional<std::uint64_t> uniform_word(std::span<const std::byte> bytes) {
  std::uint64_t first;
  std::memcpy(&first, bytes.data(), sizeof(first));
  const __m256i needle = _mm256_set1_epi64x(static_cast<long long>(first));
  const auto* p = bytes.data();
  const std::size_t n = bytes.size();
  std::size_t i = 0;
  __m256i acc = _mm256_set1_epi64x(-1);
  for (; i + 128 <= n; i += 128) {
    const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
    const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i + 32));
    const __m256i c = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i + 64));
    const __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i + 96));
    const __m256i ab = _mm256_and_si256(_mm256_cmpeq_epi64(a, needle),
                                        _mm256_cmpeq_epi64(b, needle));
    const __m256i cd = _mm256_and_si256(_mm256_cmpeq_epi64(c, needle),
                                        _mm256_cmpeq_epi64(d, needle));
    acc = _mm256_and_si256(acc, _mm256_and_si256(ab, cd));
    if (_mm256_movemask_epi8(acc) != -1) {
      return std::nullopt;
    }
  }
  for (; i + 32 <= n; i += 32) {
    const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
    acc = _mm256_and_si256(acc, _mm256_cmpeq_epi64(a, needle));
  }
  if (_mm256_movemask_epi8(acc) != -1) {
    return std::nullopt;
  }
  for (; i < n; i += sizeof(first)) {
    std::uint64_t w;
    std::memcpy(&w, p + i, sizeof(w));
    if (w != first) {
      return std::nullopt;
    }
  }
  return first;
}

void fill_word(std::span<std::byte> out, std::uint64_t word) {
  const __m256i v = _mm256_set1_epi64x(static_cast<long long>(word));
  auto* p = out.data();
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(p + i), v);
  }
  for (; i + sizeof(word) <= n; i += sizeof(word)) {
    std::memcpy(p + i, &word, sizeof(word));
  }
  std::memcpy(p + i, &word, n - i);
}

std::size_t argmin(std::span<const std::uint64_t> values) {
  const std::size_t n = values.size();
  if (n < 8) {
    return scalar::argmin(values);
  }
  const auto* p = reinterpret_cast<const __m256i*>(values.data());
  // Lane j tracks the first minimum among indices congruent to j mod 4.
  __m256i best = _mm256_loadu_si256(p);
  __m256i best_idx = _mm256_setr_epi64x(0, 1, 2, 3);
  __m256i idx = best_idx;
  const __m256i step = _mm256_set1_epi64x(4);
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) {
    const __m256i v = _mm256_loadu_si256(p + i / 4);
    idx = _mm256_add_epi64(idx, step);
    const __m256i lower = _mm256_cmpgt_epi64(best, v);
    best = _mm256_blendv_epi8(best, v, lower);
    best_idx = _mm256_blendv_epi8(best_idx, idx, lower);
  }
  alignas(32) std::uint64_t lane_val[4];
  alignas(32) std::uint64_t lane_idx[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lane_val), best);
  _mm256_store_si256(reinterpret_cast<__m256i*>(lane_idx), best_idx);
  std::uint64_t min_val = lane_val[0];
  std::uint64_t min_idx = lane_idx[0];
  for (int lane = 1; lane < 4; ++lane) {
    if (lane_val[lane] < min_val ||
        (lane_val[lane] == min_val && lane_idx[lane] < min_idx)) {
      min_val = lane_val[lane];
      min_idx = lane_idx[lane];
    }
  }
  for (; i < n; ++i) {
    if (values[i] < min_val) {
      min_val = values[i];
      min_idx = i;
    }
  }
  return static_cast<std::size_t>(min_idx);
}

}  // namespace zcs::simd::avx2
