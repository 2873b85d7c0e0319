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

#include "zcs/harness/cli.h"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "zcs/error.h"
#include "zcs/harness/config.h"
#include "zcs/harness/runner.h"
#include "zcs/zstorage/op_plan.h"

namespace zcs::harness {

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;

std::string format_summary(const Summary& s) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%s ops=%llu stable_hit_ratio=%.4f stable_throughput=%.1f final_wa=%.4f "
                "gc_migrated_mib=%.1f corruptions=%llu",
                s.scheme.c_str(), static_cast<unsigned long long>(s.ops), s.stable_hit_ratio,
                s.stable_throughput, s.final_wa, s.gc_migrated_bytes / 1048576.0,
                static_cast<unsigned long long>(s.corruptions));
  return buf;
}

Settings read_settings_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::kConfigError, "cannot read config file " + path);
  }
  return parse_settings(in, path);
}

ExperimentConfig checked_config(const Settings& settings, const std::string& source) {
  try {
    ExperimentConfig c = config_from_settings(settings);
    c.validate();
    return c;
  } catch (const Error& e) {
    throw Error(Errc::kConfigError, source + ": " + e.what());
  }
}

}  // namespace

int cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"zcsim: flash cache simulator for zoned and conventional SSDs", "zcsim"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_override;
  auto* run_cmd = app.add_subcommand("run", "run one experiment");
  run_cmd->add_option("--config", config_path, "key = value config file")->required();
  run_cmd->add_option("--output", output_override, "CSV path, overrides the config");

  std::string sweep_config;
  std::string sweep_param;
  std::vector<std::string> sweep_values;
  std::string out_dir = ".";
  auto* sweep_cmd = app.add_subcommand("sweep", "run one experiment per parameter value");
  sweep_cmd->add_option("--config", sweep_config, "base config file");
  sweep_cmd->add_option("--param", sweep_param, "parameter to vary")
      ->required()
      ->check(CLI::IsMember({"op_ratio", "cache_zones", "vop_ratio", "region_size"}));
  sweep_cmd->add_option("--values", sweep_values, "comma-separated values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--out-dir", out_dir, "directory for the CSV files");

  double t_cache = 0;
  double t_gc = 0;
  double k = 0;
  auto* op_cmd = app.add_subcommand("op-calc", "minimum over-provisioning for given rates");
  op_cmd->add_option("--t-cache", t_cache, "cache write throughput")->required();
  op_cmd->add_option("--t-gc", t_gc, "GC migration throughput")->required();
  op_cmd->add_option("--k", k, "victim invalid ratio over the mean")->required();

  std::string preset_name;
  std::string trace_out;
  std::uint64_t trace_ops = 0;
  std::uint64_t trace_seed = 1;
  std::string cache_bytes_text = "3824M";
  auto* gen_cmd = app.add_subcommand("gen-trace", "write a synthetic trace file");
  gen_cmd->add_option("--preset", preset_name, "workload preset")
      ->required()
      ->check(CLI::IsMember(workload::preset_names()));
  gen_cmd->add_option("--out", trace_out, "trace path")->required();
  gen_cmd->add_option("--ops", trace_ops, "op count (default: preset)");
  gen_cmd->add_option("--seed", trace_seed, "generator seed");
  gen_cmd->add_option("--cache-bytes", cache_bytes_text, "cache size the preset scales to");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run_cmd) {
      ExperimentConfig c = load_config(config_path);
      if (!output_override.empty()) {
        c.output_path = output_override;
      }
      const MetricsReport r = run(c);
      out << format_summary(r.summary) << '\n';
      return r.summary.corruptions == 0 ? 0 : kExitRuntime;
    }
    if (*sweep_cmd) {
      const Settings base = sweep_config.empty() ? Settings{} : read_settings_file(sweep_config);
      const std::string source = sweep_config.empty() ? "defaults" : sweep_config;
      std::filesystem::create_directories(out_dir);
      std::vector<ExperimentConfig> points;
      for (const std::string& value : sweep_values) {
        Settings s = base;
        s[sweep_param] = value;
        ExperimentConfig c = checked_config(s, source + " with " + sweep_param + "=" + value);
        c.output_path = (std::filesystem::path(out_dir) / (sweep_param + "_" + value + ".csv")).string();
        points.push_back(std::move(c));
      }
      bool clean = true;
      for (const ExperimentConfig& c : points) {
        const MetricsReport r = run(c);
        out << c.output_path << ' ' << format_summary(r.summary) << '\n';
        clean = clean && r.summary.corruptions == 0;
      }
      return clean ? 0 : kExitRuntime;
    }
    if (*op_cmd) {
      const zstorage::OpPlan plan = zstorage::compute_min_op(t_cache, t_gc, k);
      char buf[128];
      std::snprintf(buf, sizeof buf, "r_op %.4f\nr_invalid %.4f\n", plan.r_op, plan.r_invalid);
      out << buf;
      return 0;
    }
    if (*gen_cmd) {
      std::uint64_t cache_bytes = 0;
      try {
        cache_bytes = parse_bytes(cache_bytes_text);
      } catch (const Error& e) {
        err << "zcsim: --cache-bytes: " << e.what() << '\n';
        return kExitUsage;
      }
      workload::WorkloadSpec spec = *workload::preset(preset_name, cache_bytes);
      spec.seed = trace_seed;
      if (trace_ops != 0) {
        spec.op_count = trace_ops;
      }
      workload::Generator gen(spec);
      workload::write_trace(trace_out, gen.take_all());
      out << "wrote " << spec.op_count << " ops to " << trace_out << '\n';
      return 0;
    }
  } catch (const Error& e) {
    err << "zcsim: " << e.what() << '\n';
    return e.code() == Errc::kConfigError ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    err << "zcsim: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace zcs::harness
