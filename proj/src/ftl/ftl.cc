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

#include "zcs/ftl/ftl.h"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "zcs/error.h"
#include "zcs/simd/kernels.h"

namespace zcs::ftl {

void FtlConfig::validate() const {
  if (page_size == 0 || page_size % 8 != 0) {
    throw Error(Errc::kInvalidConfig, "page_size must be a positive multiple of 8");
  }
  if (pages_per_block == 0 || block_count < 2) {
    throw Error(Errc::kInvalidConfig, "need at least two blocks of at least one page");
  }
  if (!(internal_op_ratio >= 0.0)) {
    throw Error(Errc::kInvalidConfig, "internal_op_ratio must be >= 0");
  }
  if (gc_trigger_free_blocks < 1 || gc_trigger_free_blocks >= block_count) {
    throw Error(Errc::kInvalidConfig, "gc_trigger_free_blocks must be in [1, block_count)");
  }
  if (physical_bytes() / page_size >= UINT32_MAX) {
    throw Error(Errc::kInvalidConfig, "too many physical pages");
  }
}

std::uint64_t FtlConfig::exported_bytes() const {
  const auto raw = static_cast<long double>(physical_bytes()) / (1.0L + internal_op_ratio);
  const auto pages = static_cast<std::uint64_t>(std::floor(raw / page_size));
  return pages * page_size;
}

Ftl::Ftl(FtlConfig config)
    : config_(config),
      exported_pages_((config_.validate(), config_.exported_bytes() / config_.page_size)),
      pages_(config_.page_size,
             static_cast<std::size_t>(config_.pages_per_block) * config_.block_count),
      l2p_(exported_pages_, kUnmapped),
      p2l_(pages_.page_count(), kUnmapped),
      valid_(config_.block_count, 0),
      state_(config_.block_count, BlockState::kFree),
      score_(config_.block_count, kNotCandidate) {
  for (std::uint32_t b = 0; b < config_.block_count; ++b) {
    free_.push_back(b);
  }
}

void Ftl::set_score(std::uint32_t block) {
  score_[block] = state_[block] == BlockState::kClosed ? valid_[block] : kNotCandidate;
}

void Ftl::invalidate(std::uint32_t ppn) {
  const std::uint32_t block = ppn / config_.pages_per_block;
  p2l_[ppn] = kUnmapped;
  --valid_[block];
  set_score(block);
}

void Ftl::close_active() {
  if (active_) {
    state_[*active_] = BlockState::kClosed;
    set_score(*active_);
    active_.reset();
  }
}

void Ftl::ensure_active(bool migration) {
  if (active_ && next_page_ < config_.pages_per_block) {
    return;
  }
  close_active();
  if (!migration && free_.size() < config_.gc_trigger_free_blocks) {
    gc_locked();
  }
  if (active_ && next_page_ < config_.pages_per_block) {
    // GC left a partially filled active block behind.
    return;
  }
  close_active();
  if (free_.empty()) {
    throw Error(Errc::kDeviceBusy, "no free erase block left after garbage collection");
  }
  active_ = free_.front();
  free_.pop_front();
  state_[*active_] = BlockState::kActive;
  set_score(*active_);
  next_page_ = 0;
}

void Ftl::program_page(std::uint32_t lpn, const std::byte* src, std::uint32_t src_ppn,
                       bool migration) {
  if (!migration && l2p_[lpn] != kUnmapped) {
    invalidate(l2p_[lpn]);
    l2p_[lpn] = kUnmapped;
  }
  ensure_active(migration);
  const std::uint32_t ppn = *active_ * config_.pages_per_block + next_page_++;
  if (migration) {
    pages_.copy_page(src_ppn, ppn);
    invalidate(src_ppn);
    counters_.migrated_bytes += config_.page_size;
  } else {
    pages_.write(static_cast<std::uint64_t>(ppn) * config_.page_size, {src, config_.page_size});
    counters_.host_bytes_written += config_.page_size;
  }
  l2p_[lpn] = ppn;
  p2l_[ppn] = lpn;
  ++valid_[*active_];
  counters_.nand_bytes_written += config_.page_size;
}

void Ftl::write(std::uint64_t logical_address, std::span<const std::byte> payload) {
  if (logical_address % config_.page_size != 0 || payload.size() % config_.page_size != 0) {
    throw Error(Errc::kMisaligned, "write at " + std::to_string(logical_address) + " of " +
                                       std::to_string(payload.size()) +
                                       " bytes is not page aligned");
  }
  if (logical_address > exported_bytes() || payload.size() > exported_bytes() - logical_address) {
    throw Error(Errc::kOutOfRange, "write past exported capacity");
  }
  std::unique_lock lk(mu_);
  const auto first = static_cast<std::uint32_t>(logical_address / config_.page_size);
  const std::size_t n = payload.size() / config_.page_size;
  for (std::size_t i = 0; i < n; ++i) {
    program_page(first + static_cast<std::uint32_t>(i), payload.data() + i * config_.page_size,
                 0, false);
  }
}

std::vector<std::byte> Ftl::read(std::uint64_t logical_address, std::uint64_t length) const {
  std::vector<std::byte> out(length);
  read_into(logical_address, out);
  return out;
}

void Ftl::read_into(std::uint64_t logical_address, std::span<std::byte> out) const {
  if (logical_address > exported_bytes() || out.size() > exported_bytes() - logical_address) {
    throw Error(Errc::kOutOfRange, "read past exported capacity");
  }
  std::shared_lock lk(mu_);
  std::size_t done = 0;
  while (done < out.size()) {
    const std::uint64_t pos = logical_address + done;
    const std::uint64_t lpn = pos / config_.page_size;
    const std::uint64_t in_page = pos % config_.page_size;
    const std::size_t n = std::min<std::uint64_t>(config_.page_size - in_page, out.size() - done);
    if (l2p_[lpn] == kUnmapped) {
      throw Error(Errc::kUnmapped, "logical page " + std::to_string(lpn) + " was never written");
    }
    pages_.read(static_cast<std::uint64_t>(l2p_[lpn]) * config_.page_size + in_page,
                out.subspan(done, n));
    done += n;
  }
  read_bytes_.fetch_add(out.size());
}

std::optional<std::uint32_t> Ftl::select_victim() const {
  const std::size_t idx = simd::argmin(score_);
  if (score_[idx] == kNotCandidate) {
    return std::nullopt;
  }
  return static_cast<std::uint32_t>(idx);
}

std::uint64_t Ftl::gc_locked() {
  std::uint64_t migrated = 0;
  while (free_.size() < config_.gc_trigger_free_blocks) {
    const auto victim = select_victim();
    if (!victim || valid_[*victim] >= config_.pages_per_block) {
      // Nothing reclaimable; the caller reports kDeviceBusy if it runs dry.
      break;
    }
    ++counters_.gc_invocations;
    const std::uint32_t base = *victim * config_.pages_per_block;
    for (std::uint32_t i = 0; i < config_.pages_per_block && valid_[*victim] > 0; ++i) {
      const std::uint32_t lpn = p2l_[base + i];
      if (lpn != kUnmapped) {
        program_page(lpn, nullptr, base + i, true);
        ++migrated;
      }
    }
    pages_.discard(base, config_.pages_per_block);
    state_[*victim] = BlockState::kFree;
    set_score(*victim);
    free_.push_back(*victim);
    ++counters_.erase_count;
  }
  return migrated;
}

std::uint64_t Ftl::internal_gc() {
  std::unique_lock lk(mu_);
  return gc_locked();
}

FtlCounters Ftl::counters() const {
  std::shared_lock lk(mu_);
  FtlCounters c = counters_;
  c.read_bytes = read_bytes_.load();
  return c;
}

double Ftl::wa_factor() const {
  const FtlCounters c = counters();
  if (c.host_bytes_written == 0) {
    return 1.0;
  }
  return static_cast<double>(c.nand_bytes_written) / static_cast<double>(c.host_bytes_written);
}

std::uint32_t Ftl::free_block_count() const {
  std::shared_lock lk(mu_);
  return static_cast<std::uint32_t>(free_.size());
}

std::uint64_t Ftl::block_valid_count(std::uint32_t block) const {
  std::shared_lock lk(mu_);
  return valid_.at(block);
}

std::optional<std::uint64_t> Ftl::physical_page(std::uint64_t logical_page) const {
  std::shared_lock lk(mu_);
  if (logical_page >= l2p_.size() || l2p_[logical_page] == kUnmapped) {
    return std::nullopt;
  }
  return l2p_[logical_page];
}

void Ftl::check_consistency() const {
  std::shared_lock lk(mu_);
  std::vector<std::uint64_t> counted(config_.block_count, 0);
  for (std::uint32_t lpn = 0; lpn < l2p_.size(); ++lpn) {
    if (l2p_[lpn] == kUnmapped) {
      continue;
    }
    if (p2l_[l2p_[lpn]] != lpn) {
      throw Error(Errc::kUnmapped, "l2p/p2l disagree at logical page " + std::to_string(lpn));
    }
    ++counted[l2p_[lpn] / config_.pages_per_block];
  }
  for (std::uint32_t ppn = 0; ppn < p2l_.size(); ++ppn) {
    if (p2l_[ppn] != kUnmapped && l2p_[p2l_[ppn]] != ppn) {
      throw Error(Errc::kUnmapped, "stale p2l entry at physical page " + std::to_string(ppn));
    }
  }
  if (counted != valid_) {
    throw Error(Errc::kUnmapped, "per-block valid counts disagree with the page map");
  }
  if (counters_.nand_bytes_written != counters_.host_bytes_written + counters_.migrated_bytes) {
    throw Error(Errc::kUnmapped, "nand bytes != host bytes + migrated bytes");
  }
}

}  // namespace zcs::ftl
