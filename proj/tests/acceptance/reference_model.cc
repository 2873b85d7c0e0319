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

#include "reference_model.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>

namespace zcs::acceptance {

namespace {

using schemes::SchemeName;
using workload::CacheOp;
using workload::OpKind;

enum SlotStatus { kFree, kBuffered, kFlushed };
enum Group { kEmpty = 0, kWrite = 1, kRead = 2, kCleaning = 3 };

class Model {
 public:
  explicit Model(const RefConfig& c) : c_(c), slots_(c.cache_regions), zones_(c.zones) {
    zlru_ = c.scheme == SchemeName::kZCacheLib;
    fifo_ = c.scheme == SchemeName::kZnsMiddleFifo || c.scheme == SchemeName::kRegFifo;
    zoned_ = c.scheme != SchemeName::kRegLru && c.scheme != SchemeName::kRegFifo;
    direct_ = c.scheme == SchemeName::kZnsDirect;
    main_cap_ = zlru_ ? static_cast<std::size_t>(std::llround((1.0 - c.vop_ratio) * c.cache_regions))
                      : c.cache_regions;
    if (!zoned_) {
      owner_.assign(c.ftl_blocks, std::vector<std::int64_t>(c.ftl_pages_per_block, -1));
      fill_.assign(c.ftl_blocks, 0);
      closed_.assign(c.ftl_blocks, false);
      where_.assign(c.ftl_exported_pages, -1);
      for (std::uint32_t b = 0; b < c.ftl_blocks; ++b) {
        free_.push_back(b);
      }
    }
  }

  void step(const CacheOp& op) {
    if (op.kind == OpKind::kGet) {
      const bool hit = lookup(op.key);
      out_.hits.push_back(hit);
      if (!hit && op.size > 0) {
        insert(op.key, op.size);
      }
    } else {
      insert(op.key, op.size);
    }
  }

  RefOutcome finish() {
    out_.items = items_;
    out_.main_list = main_;
    out_.vop_list = vop_;
    out_.zmap = zmap_;
    if (zoned_) {
      for (const Zone& z : zones_) {
        RefZone r;
        r.write_pointer = z.wp;
        r.state = z.wp == 0 ? 0 : (z.wp == c_.zone_capacity ? 2 : 1);
        r.group = z.group;
        out_.zones.push_back(r);
      }
    } else {
      out_.ftl_map = where_;
    }
    return out_;
  }

 private:
  struct Slot {
    SlotStatus status = kFree;
  };
  struct Zone {
    Group group = kEmpty;
    std::uint64_t wp = 0;
    bool gc = false;
  };

  // ---- cache ----

  bool lookup(std::uint64_t key) {
    auto it = items_.find(key);
    if (it == items_.end()) {
      return false;
    }
    const std::uint32_t slot = it->second.slot;
    if (slots_[slot].status == kFlushed && !fifo_) {
      unlist(slot);
      main_.insert(main_.begin(), slot);
      rebalance();
    }
    return true;
  }

  void insert(std::uint64_t key, std::uint64_t size) {
    const std::uint64_t version = ++versions_[key];
    if (buf_ >= 0 && buf_off_ + size > c_.region_size) {
      flush();
    }
    if (buf_ < 0) {
      allocate();
    }
    items_[key] = RefItem{static_cast<std::uint32_t>(buf_), buf_off_, size, version};
    const std::uint64_t end = (buf_off_ + size + 4095) / 4096 * 4096;
    buf_off_ = std::min(c_.region_size, end);
    if (zoned_ && !direct_ && empty_zones() < c_.gc_trigger) {
      gc_cycle();
    }
  }

  std::int64_t first_free() const {
    for (std::size_t s = 0; s < slots_.size(); ++s) {
      if (slots_[s].status == kFree) {
        return static_cast<std::int64_t>(s);
      }
    }
    return -1;
  }

  void allocate() {
    std::int64_t s = first_free();
    if (s < 0) {
      evict();
      s = first_free();
    }
    if (s < 0) {
      throw std::runtime_error("reference: no slot after eviction");
    }
    slots_[s].status = kBuffered;
    buf_ = s;
    buf_off_ = 0;
  }

  void flush() {
    const auto slot = static_cast<std::uint32_t>(buf_);
    write_region(slot);
    slots_[slot].status = kFlushed;
    buf_ = -1;
    buf_off_ = 0;
    main_.insert(main_.begin(), slot);
    rebalance();
    if (zlru_ && c_.reorder) {
      reorder();
    }
  }

  void evict() {
    std::uint32_t slot;
    if (zlru_ && !vop_.empty()) {
      slot = vop_.back();
    } else if (!main_.empty()) {
      slot = main_.back();
    } else {
      throw std::runtime_error("reference: nothing to evict");
    }
    unlist(slot);
    forget(slot);
    invalidate_region(slot);
    slots_[slot].status = kFree;
    ++out_.evictions;
  }

  void forget(std::uint32_t slot) {
    for (auto it = items_.begin(); it != items_.end();) {
      it = it->second.slot == slot ? items_.erase(it) : std::next(it);
    }
  }

  void unlist(std::uint32_t slot) {
    std::erase(main_, slot);
    std::erase(vop_, slot);
  }

  void rebalance() {
    if (!zlru_) {
      return;
    }
    while (main_.size() > main_cap_) {
      const std::uint32_t s = main_.back();
      main_.pop_back();
      vop_.insert(vop_.begin(), s);
    }
  }

  void reorder() {
    if (vop_.empty()) {
      return;
    }
    std::map<std::uint32_t, std::uint64_t> in_main;
    for (std::uint32_t s : main_) {
      if (auto z = zone_of_slot(s)) in_main[*z] += 1;
    }
    for (std::uint32_t s : vop_) {
      if (auto z = zone_of_slot(s)) in_main[*z] += 0;
    }
    std::uint64_t total = 0;
    for (const auto& [z, n] : in_main) total += n;
    auto candidate = [&](std::optional<std::uint32_t> z) {
      return z && in_main.count(*z) && in_main[*z] * in_main.size() < total;
    };
    std::vector<std::uint32_t> stay;
    std::vector<std::uint32_t> sink;
    for (std::uint32_t s : vop_) {
      (candidate(zone_of_slot(s)) ? sink : stay).push_back(s);
    }
    stay.insert(stay.end(), sink.begin(), sink.end());
    vop_ = stay;
  }

  // ---- zoned storage ----

  std::uint64_t vaddr(std::uint32_t slot) const { return slot * c_.region_size; }

  std::optional<std::uint32_t> zone_of_slot(std::uint32_t slot) const {
    auto it = zmap_.find(vaddr(slot));
    if (it == zmap_.end()) {
      return std::nullopt;
    }
    return static_cast<std::uint32_t>(it->second / c_.zone_capacity);
  }

  std::uint32_t valid_in(std::uint32_t zone) const {
    std::uint32_t n = 0;
    for (const auto& [v, p] : zmap_) {
      n += p / c_.zone_capacity == zone;
    }
    return n;
  }

  std::uint32_t empty_zones() const {
    return static_cast<std::uint32_t>(
        std::count_if(zones_.begin(), zones_.end(), [](const Zone& z) { return z.group == kEmpty; }));
  }

  std::uint32_t open_lowest(bool gc) {
    for (std::uint32_t z = 0; z < zones_.size(); ++z) {
      if (zones_[z].group == kEmpty) {
        zones_[z].group = kWrite;
        zones_[z].gc = gc;
        order_.push_back(z);
        cursor_ = 0;
        return z;
      }
    }
    throw std::runtime_error("reference: no empty zone");
  }

  std::uint32_t pick(bool for_gc) {
    const bool can_open = empty_zones() > 0 && order_.size() < c_.max_write_zones;
    if (!for_gc && can_open && order_.size() < c_.min_write_zones) {
      return open_lowest(false);
    }
    auto room = [&](std::uint32_t z) { return c_.zone_capacity - zones_[z].wp >= c_.region_size; };
    if (for_gc) {
      for (std::uint32_t z : order_) {
        if (zones_[z].gc && room(z)) return z;
      }
    }
    for (std::size_t k = 0; k < order_.size(); ++k) {
      const std::size_t i = (cursor_ + k) % order_.size();
      const std::uint32_t z = order_[i];
      if (room(z) && (for_gc || !zones_[z].gc)) {
        cursor_ = (i + 1) % order_.size();
        return z;
      }
    }
    if (can_open) {
      return open_lowest(for_gc);
    }
    throw std::runtime_error("reference: no writable zone");
  }

  std::uint64_t append(std::uint32_t z) {
    const std::uint64_t p = z * c_.zone_capacity + zones_[z].wp;
    zones_[z].wp += c_.region_size;
    out_.device_bytes += c_.region_size;
    return p;
  }

  void seal_if_full(std::uint32_t z) {
    if (zones_[z].wp != c_.zone_capacity) {
      return;
    }
    const auto i = static_cast<std::size_t>(std::find(order_.begin(), order_.end(), z) - order_.begin());
    order_.erase(order_.begin() + static_cast<std::ptrdiff_t>(i));
    if (i < cursor_) --cursor_;
    if (cursor_ >= order_.size()) cursor_ = 0;
    zones_[z].group = kRead;
  }

  void reset_if_dead(std::uint32_t z) {
    if (zones_[z].group == kRead && valid_in(z) == 0) {
      zones_[z].wp = 0;
      zones_[z].group = kEmpty;
    }
  }

  void write_region(std::uint32_t slot) {
    if (!zoned_) {
      const std::uint64_t per = c_.region_size / 4096;
      for (std::uint64_t i = 0; i < per; ++i) {
        ftl_write(slot * per + i);
      }
      return;
    }
    const std::uint32_t z = pick(false);
    const std::uint64_t p = append(z);
    std::optional<std::uint64_t> old;
    if (auto it = zmap_.find(vaddr(slot)); it != zmap_.end()) old = it->second;
    zmap_[vaddr(slot)] = p;
    seal_if_full(z);
    if (old && direct_) {
      reset_if_dead(static_cast<std::uint32_t>(*old / c_.zone_capacity));
    }
  }

  void invalidate_region(std::uint32_t slot) {
    if (!zoned_) {
      return;
    }
    auto it = zmap_.find(vaddr(slot));
    if (it == zmap_.end()) {
      throw std::runtime_error("reference: invalidating an unmapped slot");
    }
    const auto z = static_cast<std::uint32_t>(it->second / c_.zone_capacity);
    zmap_.erase(it);
    if (direct_) {
      reset_if_dead(z);
    }
  }

  void gc_cycle() {
    ++out_.gc_cycles;
    std::size_t rounds = 0;
    while (empty_zones() < c_.gc_stop) {
      if (++rounds > 2 * zones_.size() + 2) {
        throw std::runtime_error("reference: GC cannot reach the stop watermark");
      }
      std::int64_t victim = -1;
      for (std::uint32_t z = 0; z < zones_.size(); ++z) {
        if (zones_[z].group == kRead && (victim < 0 || valid_in(z) < valid_in(static_cast<std::uint32_t>(victim)))) {
          victim = z;
        }
      }
      if (victim < 0) {
        throw std::runtime_error("reference: no victim");
      }
      const auto vz = static_cast<std::uint32_t>(victim);
      zones_[vz].group = kCleaning;
      std::vector<std::pair<std::uint64_t, std::uint64_t>> live;
      for (const auto& [v, p] : zmap_) {
        if (p / c_.zone_capacity == vz) live.emplace_back(p, v);
      }
      std::sort(live.begin(), live.end());
      for (const auto& [p, v] : live) {
        const auto slot = static_cast<std::uint32_t>(v / c_.region_size);
        if (zlru_) {
          if (slots_[slot].status != kFlushed) {
            continue;
          }
          const bool in_vop = std::find(vop_.begin(), vop_.end(), slot) != vop_.end();
          if (in_vop || c_.vop_ratio >= 1.0) {
            unlist(slot);
            forget(slot);
            slots_[slot].status = kFree;
            zmap_.erase(v);
            ++out_.drops;
            continue;
          }
        }
        const std::uint32_t t = pick(true);
        zmap_[v] = append(t);
        seal_if_full(t);
      }
      for (auto it = zmap_.begin(); it != zmap_.end();) {
        it = it->second / c_.zone_capacity == vz ? zmap_.erase(it) : std::next(it);
      }
      zones_[vz].wp = 0;
      zones_[vz].group = kEmpty;
    }
    for (Zone& z : zones_) z.gc = false;
  }

  // ---- page-mapped FTL ----

  std::uint32_t block_valid(std::uint32_t b) const {
    return static_cast<std::uint32_t>(std::count_if(owner_[b].begin(), owner_[b].end(),
                                                    [](std::int64_t x) { return x >= 0; }));
  }

  void ftl_write(std::uint64_t lpn) {
    if (where_[lpn] >= 0) {
      const std::uint64_t ppn = static_cast<std::uint64_t>(where_[lpn]);
      owner_[ppn / c_.ftl_pages_per_block][ppn % c_.ftl_pages_per_block] = -1;
      where_[lpn] = -1;
    }
    ftl_place(lpn, false);
  }

  void ftl_place(std::uint64_t lpn, bool migration) {
    const std::uint32_t ppb = c_.ftl_pages_per_block;
    if (active_ < 0 || fill_[active_] == ppb) {
      if (active_ >= 0) closed_[active_] = true, active_ = -1;
      if (!migration && free_.size() < c_.ftl_trigger) {
        ftl_gc();
      }
      if (!(active_ >= 0 && fill_[active_] < ppb)) {
        if (active_ >= 0) closed_[active_] = true, active_ = -1;
        if (free_.empty()) {
          throw std::runtime_error("reference: FTL out of blocks");
        }
        active_ = free_.front();
        free_.pop_front();
        closed_[active_] = false;
        fill_[active_] = 0;
      }
    }
    const std::uint32_t p = fill_[active_]++;
    owner_[active_][p] = static_cast<std::int64_t>(lpn);
    where_[lpn] = active_ * ppb + p;
    out_.device_bytes += 4096;
  }

  void ftl_gc() {
    while (free_.size() < c_.ftl_trigger) {
      std::int64_t victim = -1;
      for (std::uint32_t b = 0; b < owner_.size(); ++b) {
        if (closed_[b] && (victim < 0 || block_valid(b) < block_valid(static_cast<std::uint32_t>(victim)))) {
          victim = b;
        }
      }
      if (victim < 0 || block_valid(static_cast<std::uint32_t>(victim)) == c_.ftl_pages_per_block) {
        return;
      }
      ++out_.gc_cycles;
      for (std::uint32_t p = 0; p < c_.ftl_pages_per_block; ++p) {
        const std::int64_t lpn = owner_[victim][p];
        if (lpn >= 0) {
          owner_[victim][p] = -1;
          ftl_place(static_cast<std::uint64_t>(lpn), true);
        }
      }
      closed_[victim] = false;
      fill_[victim] = 0;
      free_.push_back(static_cast<std::uint32_t>(victim));
    }
  }

  RefConfig c_;
  bool zlru_ = false;
  bool fifo_ = false;
  bool zoned_ = true;
  bool direct_ = false;
  std::size_t main_cap_ = 0;

  std::vector<Slot> slots_;
  std::vector<std::uint32_t> main_;
  std::vector<std::uint32_t> vop_;
  std::map<std::uint64_t, RefItem> items_;
  std::map<std::uint64_t, std::uint64_t> versions_;
  std::int64_t buf_ = -1;
  std::uint64_t buf_off_ = 0;

  std::vector<Zone> zones_;
  std::vector<std::uint32_t> order_;
  std::size_t cursor_ = 0;
  std::map<std::uint64_t, std::uint64_t> zmap_;

  std::vector<std::vector<std::int64_t>> owner_;
  std::vector<std::uint32_t> fill_;
  std::vector<bool> closed_;
  std::vector<std::int64_t> where_;
  std::deque<std::uint32_t> free_;
  std::int64_t active_ = -1;

  RefOutcome out_;
};

}  // namespace

RefOutcome run_reference(const RefConfig& config, const std::vector<workload::CacheOp>& ops) {
  Model m(config);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    try {
      m.step(ops[i]);
    } catch (const std::exception& e) {
      throw std::runtime_error("op " + std::to_string(i) + ": " + e.what());
    }
  }
  return m.finish();
}

}  // namespace zcs::acceptance
