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

#include <cstdlib>
#include <cstring>

#include "zcs/simd/kernels.h"

namespace zcs::simd {

namespace {

struct KernelTable {
  Isa isa;
  std::optional<std::uint64_t> (*uniform_word)(std::span<const std::byte>);
  void (*fill_word)(std::span<std::byte>, std::uint64_t);
  std::size_t (*argmin)(std::span<const std::uint64_t>);
};

KernelTable select_table() {
  const char* forced = std::getenv("ZCS_SIMD");
  const bool force_scalar = forced != nullptr && std::strcmp(forced, "scalar") == 0;
#if defined(ZCS_HAVE_AVX2)
  if (!force_scalar && avx2_available()) {
    return {Isa::kAvx2, &avx2::uniform_word, &avx2::fill_word, &avx2::argmin};
  }
#else
  (void)force_scalar;
#endif
  return {Isa::kScalar, &scalar::uniform_word, &scalar::fill_word, &scalar::argmin};
}

const KernelTable& table() {
  static const KernelTable t = select_table();
  return t;
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
  }
  return "unknown";
}

bool avx2_available() {
#if defined(ZCS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() { return table().isa; }

std::optional<std::uint64_t> uniform_word(std::span<const std::byte> bytes) {
  return table().uniform_word(bytes);
}

void fill_word(std::span<std::byte> out, std::uint64_t word) {
  table().fill_word(out, word);
}

std::size_t argmin(std::span<const std::uint64_t> values) {
  return table().argmin(values);
}

}  // namespace zcs::simd
