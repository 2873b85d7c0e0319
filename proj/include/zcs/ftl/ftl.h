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

#include <atomic>
#include <cstdint>
#include <deque>
#include <optional>
#include <shared_mutex>
#include <span>
#include <vector>

#include "zcs/page_store.h"

namespace zcs::ftl {

struct FtlConfig {
  std::uint64_t page_size = 4096;
  std::uint32_t pages_per_block = 256;
  std::uint32_t block_count = 4096;
  // Reserved blocks divided by exported blocks.
  double internal_op_ratio = 0.07;
  std::uint32_t gc_trigger_free_blocks = 2;

  void validate() const;
  std::uint64_t physical_bytes() const {
    return page_size * pages_per_block * static_cast<std::uint64_t>(block_count);
  }
  // physical / (1 + internal_op_ratio), rounded down to a page multiple.
  std::uint64_t exported_bytes() const;
};

struct FtlCounters {
  std::uint64_t host_bytes_written = 0;
  std::uint64_t nand_bytes_written = 0;
  std::uint64_t migrated_bytes = 0;
  std::uint64_t read_bytes = 0;
  std::uint64_t erase_count = 0;
  std::uint64_t gc_invocations = 0;
};

// Page-mapped flash translation layer with greedy internal GC, standing in
// for a conventional block-interface SSD. Writes go to one active erase
// block; when the free pool drops below the trigger, GC erases the closed
// block with the fewest valid pages (lowest index on ties) after moving its
// valid pages into the active block.
//
// Single writer, many readers.
class Ftl {
 public:
  explicit Ftl(FtlConfig config);

  Ftl(const Ftl&) = delete;
  Ftl& operator=(const Ftl&) = delete;

  const FtlConfig& config() const { return config_; }
  std::uint64_t exported_bytes() const { return exported_pages_ * config_.page_size; }

  // `logical_address` and the payload length must be page multiples.
  void write(std::uint64_t logical_address, std::span<const std::byte> payload);

  std::vector<std::byte> read(std::uint64_t logical_address, std::uint64_t length) const;
  void read_into(std::uint64_t logical_address, std::span<std::byte> out) const;

  // Runs greedy GC while the free pool is below the trigger. Returns the
  // number of pages migrated.
  std::uint64_t internal_gc();

  // Closed block with the fewest valid pages, or nullopt if none is closed.
  std::optional<std::uint32_t> select_victim() const;

  FtlCounters counters() const;
  double wa_factor() const;

  std::uint32_t free_block_count() const;
  std::uint64_t block_valid_count(std::uint32_t block) const;
  std::optional<std::uint64_t> physical_page(std::uint64_t logical_page) const;

  // Verifies mapping/bitmap/valid-count agreement; throws on violation.
  void check_consistency() const;

 private:
  enum class BlockState : std::uint8_t { kFree, kActive, kClosed };

  static constexpr std::uint32_t kUnmapped = UINT32_MAX;
  static constexpr std::uint64_t kNotCandidate = std::uint64_t{1} << 62;

  void program_page(std::uint32_t lpn, const std::byte* src, std::uint32_t src_ppn,
                    bool migration);
  void invalidate(std::uint32_t ppn);
  void ensure_active(bool migration);
  void close_active();
  void set_score(std::uint32_t block);
  std::uint64_t gc_locked();

  FtlConfig config_;
  std::uint64_t exported_pages_;
  PageStore pages_;
  std::vector<std::uint32_t> l2p_;
  std::vector<std::uint32_t> p2l_;
  std::vector<std::uint64_t> valid_;
  std::vector<BlockState> state_;
  // valid_ for closed blocks, kNotCandidate otherwise; feeds the argmin kernel.
  std::vector<std::uint64_t> score_;
  std::deque<std::uint32_t> free_;
  std::optional<std::uint32_t> active_;
  std::uint32_t next_page_ = 0;

  FtlCounters counters_;
  mutable std::atomic<std::uint64_t> read_bytes_{0};
  mutable std::shared_mutex mu_;
};

}  // namespace zcs::ftl
