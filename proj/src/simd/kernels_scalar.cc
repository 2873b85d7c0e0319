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

#include <cstring>

#include "zcs/simd/kernels.h"

namespace zcs::simd::scalar {

std::optional<std::uint64_t> uniform_word(std::span<const std::byte> bytes) {
  std::uint64_t first;
  std::memcpy(&first, bytes.data(), sizeof(first));
  for (std::size_t i = sizeof(first); i < bytes.size(); i += sizeof(first)) {
    std::uint64_t w;
    std::memcpy(&w, bytes.data() + i, sizeof(w));
    if (w != first) {
      return std::nullopt;
    }
  }
  return first;
}

void fill_word(std::span<std::byte> out, std::uint64_t word) {
  const std::size_t whole = out.size() / sizeof(word) * sizeof(word);
  for (std::size_t i = 0; i < whole; i += sizeof(word)) {
    std::memcpy(out.data() + i, &word, sizeof(word));
  }
  std::memcpy(out.data() + whole, &word, out.size() - whole);
}

std::size_t argmin(std::span<const std::uint64_t> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) {
      best = i;
    }
  }
  return best;
}

}  // namespace zcs::simd::scalar
