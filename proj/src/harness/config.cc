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

#include "zcs/harness/config.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>

#include "zcs/error.h"

namespace zcs::harness {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

[[noreturn]] void config_error(const std::string& what) { throw Error(Errc::kConfigError, what); }

std::uint64_t parse_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) {
    config_error(std::string(key) + ": expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

double parse_double(std::string_view key, std::string_view v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(std::string(v), &used);
    if (used == v.size()) {
      return d;
    }
  } catch (const std::exception&) {
  }
  config_error(std::string(key) + ": expected a number, got '" + std::string(v) + "'");
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") {
    return true;
  }
  if (v == "false" || v == "0" || v == "no" || v == "off") {
    return false;
  }
  config_error(std::string(key) + ": expected true or false, got '" + std::string(v) + "'");
}

std::uint32_t parse_u32(std::string_view key, std::string_view v) {
  const std::uint64_t x = parse_u64(key, v);
  if (x > UINT32_MAX) {
    config_error(std::string(key) + " is out of range");
  }
  return static_cast<std::uint32_t>(x);
}

}  // namespace

std::uint64_t parse_bytes(std::string_view text) {
  std::string_view t = trim(text);
  std::uint64_t value = 0;
  const auto r = std::from_chars(t.data(), t.data() + t.size(), value);
  if (r.ec != std::errc() || r.ptr == t.data()) {
    config_error("bad byte count '" + std::string(text) + "'");
  }
  std::string_view unit = trim(t.substr(static_cast<std::size_t>(r.ptr - t.data())));
  std::uint64_t scale = 1;
  if (unit.empty() || unit == "B") {
    scale = 1;
  } else if (unit == "K" || unit == "KiB") {
    scale = 1ULL << 10;
  } else if (unit == "M" || unit == "MiB") {
    scale = 1ULL << 20;
  } else if (unit == "G" || unit == "GiB") {
    scale = 1ULL << 30;
  } else {
    config_error("bad unit '" + std::string(unit) + "' in '" + std::string(text) + "'");
  }
  if (value > UINT64_MAX / scale) {
    config_error("byte count '" + std::string(text) + "' overflows");
  }
  return value * scale;
}

Settings parse_settings(std::istream& in, const std::string& source) {
  Settings out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view l = trim(line);
    if (l.empty() || l.front() == '#') {
      continue;
    }
    const std::size_t eq = l.find('=');
    if (eq == std::string_view::npos) {
      config_error(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key(trim(l.substr(0, eq)));
    const std::string value(trim(l.substr(eq + 1)));
    if (key.empty()) {
      config_error(source + ":" + std::to_string(lineno) + ": empty key");
    }
    out[key] = value;
  }
  return out;
}

ExperimentConfig config_from_settings(const Settings& settings) {
  ExperimentConfig c;
  schemes::SchemeSpec& s = c.scheme;
  auto get = [&](std::string_view key) -> const std::string* {
    auto it = settings.find(key);
    return it == settings.end() ? nullptr : &it->second;
  };
  using Apply = std::function<void(std::string_view, const std::string&)>;
  const std::map<std::string, Apply, std::less<>> scheme_keys = {
      {"scheme",
       [&](auto k, auto& v) {
         auto n = schemes::parse_scheme_name(v);
         if (!n) {
           config_error(std::string(k) + ": unknown scheme '" + v + "'");
         }
         s.name = *n;
       }},
      {"zone_count", [&](auto k, auto& v) { s.device.zone_count = parse_u32(k, v); }},
      {"cache_zones", [&](auto k, auto& v) { s.device.zone_count = parse_u32(k, v); }},
      {"zone_capacity", [&](auto, auto& v) { s.device.zone_capacity = parse_bytes(v); }},
      {"max_open_zones", [&](auto k, auto& v) { s.device.max_open_zones = parse_u32(k, v); }},
      {"read_bandwidth", [&](auto, auto& v) { s.device.read_bandwidth = parse_bytes(v); }},
      {"write_bandwidth", [&](auto, auto& v) { s.device.write_bandwidth = parse_bytes(v); }},
      {"op_ratio", [&](auto k, auto& v) { s.op_ratio = parse_double(k, v); }},
      {"region_size", [&](auto, auto& v) { s.region_size = parse_bytes(v); }},
      {"cache_regions", [&](auto k, auto& v) { s.cache_regions = parse_u32(k, v); }},
      {"vop_ratio", [&](auto k, auto& v) { s.vop_ratio = parse_double(k, v); }},
      {"zlru_reorder", [&](auto k, auto& v) { s.zlru_reorder = parse_bool(k, v); }},
      {"min_write_zones", [&](auto k, auto& v) { s.min_write_zones = parse_u32(k, v); }},
      {"max_write_zones", [&](auto k, auto& v) { s.max_write_zones = parse_u32(k, v); }},
      {"w_low", [&](auto k, auto& v) { s.w_low = parse_double(k, v); }},
      {"w_high", [&](auto k, auto& v) { s.w_high = parse_double(k, v); }},
      {"background_gc", [&](auto k, auto& v) { s.background_gc = parse_bool(k, v); }},
      {"ftl_pages_per_block", [&](auto k, auto& v) { s.ftl_pages_per_block = parse_u32(k, v); }},
      {"ftl_gc_trigger_free_blocks",
       [&](auto k, auto& v) { s.ftl_gc_trigger_free_blocks = parse_u32(k, v); }},
      {"interval_ops", [&](auto k, auto& v) { c.interval_ops = parse_u64(k, v); }},
      {"timing", [&](auto k, auto& v) { c.timing_enabled = parse_bool(k, v); }},
      {"output", [&](auto, auto& v) { c.output_path = v; }},
      {"verify", [&](auto k, auto& v) { c.verify_payloads = parse_bool(k, v); }},
      {"trace", [&](auto, auto& v) { c.trace_path = v; }},
  };
  workload::WorkloadSpec& w = c.workload;
  const std::map<std::string, Apply, std::less<>> workload_keys = {
      {"get_ratio", [&](auto k, auto& v) { w.get_ratio = parse_double(k, v); }},
      {"key_space", [&](auto k, auto& v) { w.key_space = parse_u64(k, v); }},
      {"zipf_alpha", [&](auto k, auto& v) { w.zipf_alpha = parse_double(k, v); }},
      {"object_size_min", [&](auto, auto& v) { w.object_size_min = parse_bytes(v); }},
      {"object_size_max", [&](auto, auto& v) { w.object_size_max = parse_bytes(v); }},
      {"ops", [&](auto k, auto& v) { w.op_count = parse_u64(k, v); }},
      {"seed", [&](auto k, auto& v) { w.seed = parse_u64(k, v); }},
      {"independent_set_keys", [&](auto k, auto& v) { w.independent_set_keys = parse_bool(k, v); }},
  };

  for (const auto& [key, value] : settings) {
    if (key != "workload" && !scheme_keys.count(key) && !workload_keys.count(key)) {
      config_error("unknown key '" + key + "'");
    }
  }
  for (const auto& [key, apply] : scheme_keys) {
    if (const std::string* v = get(key)) {
      apply(key, *v);
    }
  }
  const std::string preset_name = get("workload") ? *get("workload") : "l2_wc";
  const std::uint64_t cache_bytes =
      static_cast<std::uint64_t>(schemes::planned_cache_regions(s)) * s.effective_region_size();
  auto p = workload::preset(preset_name, cache_bytes);
  if (!p) {
    config_error("workload: unknown preset '" + preset_name + "'");
  }
  w = *p;
  for (const auto& [key, apply] : workload_keys) {
    if (const std::string* v = get(key)) {
      apply(key, *v);
    }
  }
  return c;
}

void ExperimentConfig::validate() const {
  if (interval_ops < 1) {
    config_error("interval_ops must be at least 1");
  }
  scheme.validate();
  workload.validate(scheme.effective_region_size());
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    config_error("cannot read config file " + path);
  }
  try {
    ExperimentConfig c = config_from_settings(parse_settings(in, path));
    c.validate();
    return c;
  } catch (const Error& e) {
    throw Error(Errc::kConfigError, path + ": " + e.what());
  }
}

}  // namespace zcs::harness
