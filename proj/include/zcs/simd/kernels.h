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

// Data-parallel kernels used on the storage hot paths: page fill detection
// for the page store, payload pattern fill, and minimum search for GC victim
// selection. Each kernel has a portable scalar reference and, where the
// target supports it, an AVX2 variant. The dispatching entry points pick the
// widest variant the running CPU supports, once per process.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

namespace zcs::simd {

enum class Isa { kScalar, kAvx2 };

const char* isa_name(Isa isa);

// True when the binary carries an AVX2 variant and the CPU can run it.
bool avx2_available();

// ISA used by the dispatching entry points. Setting ZCS_SIMD=scalar in the
// environment forces the scalar path.
Isa active_isa();

// If `bytes` is a repetition of one 8-byte word, returns that word.
// `bytes.size()` must be a non-zero multiple of 8.
std::optional<std::uint64_t> uniform_word(std::span<const std::byte> bytes);

// Writes `word` repeatedly over `out`. A trailing partial word receives the
// word's leading bytes (little-endian byte order of the word).
void fill_word(std::span<std::byte> out, std::uint64_t word);

// Index of the first minimum element. `values` must be non-empty and every
// element must be below 2^63.
std::size_t argmin(std::span<const std::uint64_t> values);

namespace scalar {
std::optional<std::uint64_t> uniform_word(std::span<const std::byte> bytes);
void fill_word(std::span<std::byte> out, std::uint64_t word);
std::size_t argmin(std::span<const std::uint64_t> values);
}  // namespace scalar

#if defined(ZCS_HAVE_AVX2)
namespace avx2 {
std::optional<std::uint64_t> uniform_word(std::span<const std::byte> bytes);
void fill_word(std::span<std::byte> out, std::uint64_t word);
std::size_t argmin(std::span<const std::uint64_t> values);
}  // namespace avx2
#endif

}  // namespace zcs::simd
