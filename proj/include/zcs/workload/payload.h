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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace zcs::workload {

std::uint64_t mix64(std::uint64_t x);

// Every 4 KiB page of an item value holds one repeated word derived from
// (key, version, page index), so values are checkable without being stored
// and compress to one word per page inside the emulated flash.
std::uint64_t payload_word(std::uint64_t key, std::uint64_t version, std::uint64_t page);
void fill_payload(std::uint64_t key, std::uint64_t version, std::span<std::byte> out);
std::vector<std::byte> make_payload(std::uint64_t key, std::uint64_t version, std::uint64_t size);
bool verify_payload(std::uint64_t key, std::uint64_t version, std::span<const std::byte> data);

}  // namespace zcs::workload
