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

#include "zcs/page_store.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <string>

#include "zcs/error.h"
#include "zcs/simd/kernels.h"

namespace zcs {

static_assert(std::endian::native == std::endian::little,
              "word-filled pages assume little-endian byte order");

PageStore::PageStore(std::size_t page_size, std::size_t page_count)
    : page_size_(page_size), slots_(page_count) {
  if (page_size == 0 || page_size % sizeof(std::uint64_t) != 0) {
    throw Error(Errc::kInvalidConfig,
                "page size must be a positive multiple of 8, got " + std::to_string(page_size));
  }
}

void PageStore::store_whole_page(Slot& slot, const std::byte* src) {
  if (auto word = simd::uniform_word({src, page_size_})) {
    release(slot);
    slot.word = *word;
    return;
  }
  std::memcpy(materialize(slot), src, page_size_);
}

std::byte* PageStore::materialize(Slot& slot) {
  if (!slot.raw) {
    slot.raw = std::make_unique_for_overwrite<std::byte[]>(page_size_);
    simd::fill_word({slot.raw.get(), page_size_}, slot.word);
    ++raw_pages_;
  }
  return slot.raw.get();
}

void PageStore::release(Slot& slot) {
  if (slot.raw) {
    slot.raw.reset();
    --raw_pages_;
  }
}

void PageStore::write(std::uint64_t offset, std::span<const std::byte> data) {
  if (offset > capacity_bytes() || data.size() > capacity_bytes() - offset) {
    throw Error(Errc::kOutOfRange, "page store write past end");
  }
  std::size_t done = 0;
  while (done < data.size()) {
    const std::uint64_t pos = offset + done;
    const std::size_t page = pos / page_size_;
    const std::size_t in_page = pos % page_size_;
    const std::size_t n = std::min(page_size_ - in_page, data.size() - done);
    Slot& slot = slots_[page];
    if (n == page_size_) {
      store_whole_page(slot, data.data() + done);
    } else {
      std::memcpy(materialize(slot) + in_page, data.data() + done, n);
    }
    done += n;
  }
}

void PageStore::read(std::uint64_t offset, std::span<std::byte> out) const {
  if (offset > capacity_bytes() || out.size() > capacity_bytes() - offset) {
    throw Error(Errc::kOutOfRange, "page store read past end");
  }
  std::size_t done = 0;
  while (done < out.size()) {
    const std::uint64_t pos = offset + done;
    const std::size_t page = pos / page_size_;
    const std::size_t in_page = pos % page_size_;
    const std::size_t n = std::min(page_size_ - in_page, out.size() - done);
    const Slot& slot = slots_[page];
    if (slot.raw) {
      std::memcpy(out.data() + done, slot.raw.get() + in_page, n);
    } else if (in_page % sizeof(std::uint64_t) == 0) {
      simd::fill_word(out.subspan(done, n), slot.word);
    } else {
      // Unaligned start inside a word-filled page: rotate the word.
      const unsigned shift = static_cast<unsigned>(in_page % sizeof(std::uint64_t)) * 8;
      const std::uint64_t rotated = (slot.word >> shift) | (slot.word << (64 - shift));
      simd::fill_word(out.subspan(done, n), rotated);
    }
    done += n;
  }
}

void PageStore::copy_page(std::size_t src, std::size_t dst) {
  if (src == dst) {
    return;
  }
  Slot& from = slots_.at(src);
  Slot& to = slots_.at(dst);
  if (from.raw) {
    std::memcpy(materialize(to), from.raw.get(), page_size_);
  } else {
    release(to);
    to.word = from.word;
  }
}

void PageStore::discard(std::size_t first_page, std::size_t count) {
  if (first_page > slots_.size() || count > slots_.size() - first_page) {
    throw Error(Errc::kOutOfRange, "page store discard past end");
  }
  for (std::size_t i = first_page; i < first_page + count; ++i) {
    release(slots_[i]);
    slots_[i].word = 0;
  }
}

}  // namespace zcs
