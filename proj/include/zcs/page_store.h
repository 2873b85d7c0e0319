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
#include <memory>
#include <span>
#include <vector>

namespace zcs {

// Byte-faithful paged storage. A page whose content is one repeated 8-byte
// word is kept as that word; any other page keeps its full bytes. Pages
// never written read back as zeros. Not internally synchronized.
class PageStore {
 public:
  PageStore(std::size_t page_size, std::size_t page_count);

  PageStore(const PageStore&) = delete;
  PageStore& operator=(const PageStore&) = delete;
  PageStore(PageStore&&) = default;
  PageStore& operator=(PageStore&&) = default;

  std::size_t page_size() const { return page_size_; }
  std::size_t page_count() const { return slots_.size(); }
  std::uint64_t capacity_bytes() const {
    return static_cast<std::uint64_t>(page_size_) * slots_.size();
  }

  void write(std::uint64_t offset, std::span<const std::byte> data);
  void read(std::uint64_t offset, std::span<std::byte> out) const;

  void copy_page(std::size_t src, std::size_t dst);
  // Returns pages to the never-written state.
  void discard(std::size_t first_page, std::size_t count);

  // Pages currently holding full byte copies.
  std::size_t raw_page_count() const { return raw_pages_; }

 private:
  struct Slot {
    std::uint64_t word = 0;
    std::unique_ptr<std::byte[]> raw;
  };

  void store_whole_page(Slot& slot, const std::byte* src);
  std::byte* materialize(Slot& slot);
  void release(Slot& slot);

  std::size_t page_size_;
  std::vector<Slot> slots_;
  std::size_t raw_pages_ = 0;
};

}  // namespace zcs
