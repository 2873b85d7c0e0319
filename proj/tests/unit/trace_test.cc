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

#include <map>
#include <sstream>

#include "gtest_support.h"
#include "test_support.h"
#include "zcs/workload/workload.h"

namespace zcs::workload {
namespace {

std::vector<CacheOp> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_trace(in);
}

TEST(Trace, ThreeLineExample) {
  const auto ops = parse("set a 1024\nget a\nget b\n");
  ASSERT_EQ(ops.size(), 3u);
  EXPECT_EQ(ops[0], (CacheOp{OpKind::kSet, 0, 1024}));
  EXPECT_EQ(ops[1], (CacheOp{OpKind::kGet, 0, 1024}));
  EXPECT_EQ(ops[2], (CacheOp{OpKind::kGet, 1, 0}));
}

TEST(Trace, CommentsBlankLinesAndCrlf) {
  const auto ops = parse("# header\n\nset x 10\r\nget x\r\n");
  ASSERT_EQ(ops.size(), 2u);
  EXPECT_EQ(ops[1].size, 10u);
}

TEST(Trace, EmptyInput) { EXPECT_TRUE(parse("").empty()); }

TEST(Trace, ErrorsNameTheLine) {
  try {
    parse("set a 1\nput a\n");
    FAIL() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kParseError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_ERRC(parse("set a\n"), Errc::kParseError);
  EXPECT_ERRC(parse("set a 12x\n"), Errc::kParseError);
  EXPECT_ERRC(parse("get a b\n"), Errc::kParseError);
  EXPECT_ERRC(parse("get  a\n"), Errc::kParseError);
}

TEST(Trace, FileRoundTripKeepsShape) {
  WorkloadSpec s;
  s.op_count = 2000;
  s.key_space = 300;
  const auto ops = Generator(s).take_all();
  const std::string path = testing::temp_dir("trace") + "/t.trace";
  write_trace(path, ops);
  const auto back = read_trace(path);
  ASSERT_EQ(back.size(), ops.size());
  // Keys are renumbered by first appearance; the equality pattern survives.
  std::map<std::uint64_t, std::uint64_t> rename;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    EXPECT_EQ(back[i].kind, ops[i].kind);
    auto [it, fresh] = rename.emplace(ops[i].key, back[i].key);
    EXPECT_EQ(it->second, back[i].key);
    if (ops[i].kind == OpKind::kSet) {
      EXPECT_EQ(back[i].size, ops[i].size);
    }
  }
  EXPECT_ERRC(read_trace(path + ".missing"), Errc::kIoError);
}

}  // namespace
}  // namespace zcs::workload
