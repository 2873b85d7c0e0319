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

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "zcs/error.h"
#include "zcs/workload/workload.h"

namespace zcs::workload {

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(Errc::kParseError, "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split_spaces(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t next = s.find(' ', pos);
    const std::size_t end = next == std::string_view::npos ? s.size() : next;
    out.push_back(s.substr(pos, end - pos));
    if (next == std::string_view::npos) {
      break;
    }
    pos = next + 1;
  }
  return out;
}

}  // namespace

std::vector<CacheOp> parse_trace(std::istream& in) {
  std::vector<CacheOp> ops;
  std::unordered_map<std::string, std::uint64_t> ids;
  std::unordered_map<std::uint64_t, std::uint64_t> sizes;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty() || line[0] == '#') {
      continue;
    }
    const auto f = split_spaces(line);
    if (f[0] != "get" && f[0] != "set") {
      parse_error(lineno, "unknown op '" + std::string(f[0]) + "'");
    }
    const bool is_set = f[0] == "set";
    if (f.size() != (is_set ? 3u : 2u)) {
      parse_error(lineno, is_set ? "expected 'set <key> <size>'" : "expected 'get <key>'");
    }
    if (f[1].empty()) {
      parse_error(lineno, "empty key");
    }
    auto [it, fresh] = ids.try_emplace(std::string(f[1]), ids.size());
    CacheOp op;
    op.key = it->second;
    if (is_set) {
      op.kind = OpKind::kSet;
      const auto r = std::from_chars(f[2].data(), f[2].data() + f[2].size(), op.size);
      if (r.ec != std::errc() || r.ptr != f[2].data() + f[2].size()) {
        parse_error(lineno, "bad size '" + std::string(f[2]) + "'");
      }
      sizes[op.key] = op.size;
    } else {
      op.kind = OpKind::kGet;
      auto s = sizes.find(op.key);
      op.size = s == sizes.end() ? 0 : s->second;
    }
    ops.push_back(op);
  }
  return ops;
}

std::vector<CacheOp> read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::kIoError, "cannot open trace " + path);
  }
  return parse_trace(in);
}

void write_trace(const std::string& path, const std::vector<CacheOp>& ops) {
  std::ofstream out(path);
  if (!out) {
    throw Error(Errc::kIoError, "cannot create " + path);
  }
  for (const CacheOp& op : ops) {
    if (op.kind == OpKind::kSet) {
      out << "set " << op.key << ' ' << op.size << '\n';
    } else {
      out << "get " << op.key << '\n';
    }
  }
  if (!out) {
    throw Error(Errc::kIoError, "write failed for " + path);
  }
}

}  // namespace zcs::workload
