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

#include "zcs/harness/runner.h"

#include <cstdio>
#include <fstream>
#include <unordered_map>

#include "zcs/error.h"
#include "zcs/workload/payload.h"

namespace zcs::harness {

namespace {

using workload::CacheOp;
using workload::OpKind;

Stage stage_after(Stage current, const schemes::EngineMetrics& m) {
  Stage next = current;
  if (m.cache.evicted_regions > 0 && next < Stage::kEvicting) {
    next = Stage::kEvicting;
  }
  if (m.gc_cycles + m.zone_resets + m.ftl_gc_invocations > 0) {
    next = Stage::kStable;
  }
  return next;
}

IntervalRow make_row(std::uint64_t interval, std::uint64_t ops, std::uint64_t hits,
                     std::uint64_t misses, const schemes::EngineMetrics& m, Stage stage) {
  IntervalRow r;
  r.interval = interval;
  r.ops = ops;
  r.hits = hits;
  r.misses = misses;
  r.hit_ratio = hits + misses == 0 ? 0.0 : static_cast<double>(hits) / (hits + misses);
  r.cache_bytes = m.cache_bytes_written;
  r.device_bytes = m.device_bytes_written;
  r.wa_cum = m.wa_factor;
  r.gc_migrated_bytes = m.gc_migrated_bytes;
  r.empty_zones = m.empty_zones;
  r.stage = stage;
  return r;
}

MetricsReport run_source(const ExperimentConfig& config, const std::function<bool(CacheOp&)>& next,
                         const RunHooks& hooks) {
  auto engine = schemes::build(config.scheme);
  if (hooks.gc_observer) {
    engine->set_gc_observer(hooks.gc_observer);
  }
  SimClock clock(config.scheme.device.read_bandwidth, config.scheme.device.write_bandwidth);
  std::unordered_map<std::uint64_t, std::uint64_t> version;

  MetricsReport report;
  Summary& sum = report.summary;
  sum.scheme = schemes::scheme_name(config.scheme.name);
  sum.workload = config.trace_path.empty() ? config.workload.name : config.trace_path;

  Stage stage = Stage::kFilling;
  schemes::EngineMetrics prev = engine->metrics();
  std::uint64_t index = 0;
  std::uint64_t interval_hits = 0;
  std::uint64_t interval_misses = 0;
  CacheOp op;
  while (next(op)) {
    bool hit = false;
    try {
      if (op.kind == OpKind::kGet) {
        auto value = engine->lookup(op.key);
        if (value) {
          hit = true;
          if (config.verify_payloads) {
            ++sum.verified_hits;
            auto v = version.find(op.key);
            if (v == version.end() || !workload::verify_payload(op.key, v->second, *value)) {
              ++sum.corruptions;
            }
          }
        } else if (op.size > 0) {
          const std::uint64_t v = ++version[op.key];
          engine->insert(op.key, workload::make_payload(op.key, v, op.size));
        }
      } else {
        const std::uint64_t v = ++version[op.key];
        engine->insert(op.key, workload::make_payload(op.key, v, op.size));
      }
    } catch (const Error& e) {
      throw Error(e.code(), "op " + std::to_string(index) + ": " + e.what());
    }

    const schemes::EngineMetrics m = engine->metrics();
    double dt = 0;
    if (config.timing_enabled) {
      dt = clock.charge(m.device_bytes_written - prev.device_bytes_written,
                        m.device_read_bytes - prev.device_read_bytes);
    }
    if (op.kind == OpKind::kGet) {
      (hit ? interval_hits : interval_misses) += 1;
      (hit ? sum.hits : sum.misses) += 1;
    }
    if (stage == Stage::kStable) {
      ++sum.stable_ops;
      sum.stable_seconds += dt;
      if (op.kind == OpKind::kGet) {
        (hit ? sum.stable_hits : sum.stable_misses) += 1;
      }
    }
    const Stage after = stage_after(stage, m);
    if (after != stage) {
      if (after >= Stage::kEvicting && sum.evicting_from == UINT64_MAX) {
        sum.evicting_from = index + 1;
      }
      if (after == Stage::kStable) {
        sum.stable_from = index + 1;
      }
      stage = after;
    }
    if (hooks.on_op) {
      hooks.on_op(index, op, hit);
    }
    prev = m;
    ++index;
    if (index % config.interval_ops == 0) {
      report.rows.push_back(
          make_row(report.rows.size(), index, interval_hits, interval_misses, m, stage));
      interval_hits = interval_misses = 0;
    }
  }
  if (index % config.interval_ops != 0) {
    report.rows.push_back(
        make_row(report.rows.size(), index, interval_hits, interval_misses, prev, stage));
  }

  if (hooks.on_finish) {
    hooks.on_finish(*engine);
  }
  engine->stop();
  const schemes::EngineMetrics m = engine->metrics();
  sum.ops = index;
  sum.stable_hit_ratio = sum.stable_hits + sum.stable_misses == 0
                             ? 0.0
                             : static_cast<double>(sum.stable_hits) /
                                   (sum.stable_hits + sum.stable_misses);
  sum.stable_throughput =
      sum.stable_seconds > 0 ? static_cast<double>(sum.stable_ops) / sum.stable_seconds : 0.0;
  sum.sim_seconds = clock.seconds();
  sum.final_wa = m.wa_factor;
  sum.cache_bytes = m.cache_bytes_written;
  sum.device_bytes = m.device_bytes_written;
  sum.gc_migrated_bytes = m.gc_migrated_bytes;
  sum.gc_cycles = m.gc_cycles;
  sum.zone_resets = m.zone_resets;
  sum.evicted_regions = m.cache.evicted_regions;
  sum.dropped_regions = m.cache.dropped_regions;

  if (config.verify_payloads) {
    cache::Cache& c = engine->cache();
    for (std::uint64_t key : c.indexed_keys()) {
      auto value = c.lookup(key);
      auto v = version.find(key);
      ++sum.verified_items;
      if (!value || v == version.end() || !workload::verify_payload(key, v->second, *value)) {
        ++sum.corruptions;
      }
    }
  }

  if (!config.output_path.empty()) {
    std::ofstream out(config.output_path);
    out << report.to_csv();
    if (!out) {
      throw Error(Errc::kIoError, "cannot write " + config.output_path);
    }
  }
  return report;
}

}  // namespace

const char* const kCsvHeader =
    "interval,ops,hits,misses,hit_ratio,cache_bytes,device_bytes,wa_cum,gc_migrated_bytes,"
    "empty_zones,stage";

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::kFilling: return "filling";
    case Stage::kEvicting: return "evicting";
    case Stage::kStable: return "stable";
  }
  return "unknown";
}

SimClock::SimClock(std::uint64_t read_bandwidth, std::uint64_t write_bandwidth)
    : read_bw_(static_cast<double>(read_bandwidth)),
      write_bw_(static_cast<double>(write_bandwidth)) {
  if (read_bandwidth == 0 || write_bandwidth == 0) {
    throw Error(Errc::kInvalidConfig, "bandwidths must be positive");
  }
}

double SimClock::charge(std::uint64_t write_bytes, std::uint64_t read_bytes) {
  const double dt = static_cast<double>(write_bytes) / write_bw_ +
                    static_cast<double>(read_bytes) / read_bw_;
  seconds_ += dt;
  return dt;
}

std::string MetricsReport::to_csv() const {
  std::string out = kCsvHeader;
  out += '\n';
  char buf[512];
  for (const IntervalRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%llu,%llu,%llu,%llu,%.4f,%llu,%llu,%.6f,%llu,%u,%s\n",
                  static_cast<unsigned long long>(r.interval),
                  static_cast<unsigned long long>(r.ops), static_cast<unsigned long long>(r.hits),
                  static_cast<unsigned long long>(r.misses), r.hit_ratio,
                  static_cast<unsigned long long>(r.cache_bytes),
                  static_cast<unsigned long long>(r.device_bytes), r.wa_cum,
                  static_cast<unsigned long long>(r.gc_migrated_bytes), r.empty_zones,
                  stage_name(r.stage));
    out += buf;
  }
  const Summary& s = summary;
  std::snprintf(buf, sizeof buf,
                "#summary scheme=%s workload=%s ops=%llu stable_ops=%llu "
                "stable_hit_ratio=%.4f stable_throughput=%.1f final_wa=%.6f sim_seconds=%.3f "
                "gc_migrated_bytes=%llu gc_cycles=%llu corruptions=%llu\n",
                s.scheme.c_str(), s.workload.c_str(), static_cast<unsigned long long>(s.ops),
                static_cast<unsigned long long>(s.stable_ops), s.stable_hit_ratio,
                s.stable_throughput, s.final_wa, s.sim_seconds,
                static_cast<unsigned long long>(s.gc_migrated_bytes),
                static_cast<unsigned long long>(s.gc_cycles),
                static_cast<unsigned long long>(s.corruptions));
  out += buf;
  return out;
}

MetricsReport run(const ExperimentConfig& config, const RunHooks& hooks) {
  config.validate();
  if (!config.trace_path.empty()) {
    return run_ops(config, workload::read_trace(config.trace_path), hooks);
  }
  workload::Generator gen(config.workload);
  return run_source(config, [&](CacheOp& op) { return gen.next(op); }, hooks);
}

MetricsReport run_ops(const ExperimentConfig& config, const std::vector<CacheOp>& ops,
                      const RunHooks& hooks) {
  std::size_t i = 0;
  return run_source(
      config,
      [&](CacheOp& op) {
        if (i == ops.size()) {
          return false;
        }
        op = ops[i++];
        return true;
      },
      hooks);
}

double simulate_time(schemes::Engine& engine, const std::vector<CacheOp>& ops) {
  const auto& dc = engine.spec().device;
  SimClock clock(dc.read_bandwidth, dc.write_bandwidth);
  std::unordered_map<std::uint64_t, std::uint64_t> version;
  schemes::EngineMetrics prev = engine.metrics();
  for (const CacheOp& op : ops) {
    if (op.kind == OpKind::kSet || (!engine.lookup(op.key) && op.size > 0)) {
      const std::uint64_t v = ++version[op.key];
      engine.insert(op.key, workload::make_payload(op.key, v, op.size));
    }
    const schemes::EngineMetrics m = engine.metrics();
    clock.charge(m.device_bytes_written - prev.device_bytes_written,
                 m.device_read_bytes - prev.device_read_bytes);
    prev = m;
  }
  return clock.seconds();
}

}  // namespace zcs::harness
