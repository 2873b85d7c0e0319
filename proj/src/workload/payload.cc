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

#include "zcs/workload/payload.h"

#include <algorithm>
#include <cstring>

#include "zcs/simd/kernels.h"
#include "zcs/zns/device.h"

namespace zcs::workload {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t payload_word(std::uint64_t key, std::uint64_t version, std::uint64_t page) {
  return mix64(mix64(key) ^ mix64(version * 0x100000001b3ULL + page));
}

void fill_payload(std::uint64_t key, std::uint64_t version, std::span<std::byte> out) {
  for (std::uint64_t page = 0; page * zns::kPageSize < out.size(); ++page) {
    const std::uint64_t begin = page * zns::kPageSize;
    const std::uint64_t n = std::min<std::uint64_t>(zns::kPageSize, out.size() - begin);
    simd::fill_word(out.subspan(begin, n), payload_word(key, version, page));
  }
}

std::vector<std::byte> make_payload(std::uint64_t key, std::uint64_t version, std::uint64_t size) {
  std::vector<std::byte> out(size);
  fill_payload(key, version, out);
  return out;
}

bool verify_payload(std::uint64_t key, std::uint64_t version, std::span<const std::byte> data) {
  for (std::uint64_t page = 0; page * zns::kPageSize < data.size(); ++page) {
    const std::uint64_t begin = page * zns::kPageSize;
    const std::uint64_t n = std::min<std::uint64_t>(zns::kPageSize, data.size() - begin);
    const std::uint64_t word = payload_word(key, version, page);
    auto chunk = data.subspan(begin, n);
    const std::uint64_t whole = n / 8 * 8;
    if (whole != 0) {
      auto w = simd::uniform_word(chunk.first(whole));
      if (!w || *w != word) {
        return false;
      }
    }
    if (whole != n && std::memcmp(chunk.data() + whole, &word, n - whole) != 0) {
      return false;
    }
  }
  return true;
}

}  // namespace zcs::workload
