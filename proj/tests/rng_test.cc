// Copyright 2026 The sphloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sphloc/rng.h"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

namespace sphloc {
namespace {

using Block = std::array<std::uint32_t, 4>;

// Known-answer vectors published with the Random123 reference implementation.
TEST(PhiloxTest, KnownAnswerZero) {
  EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}),
            (Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
}

TEST(PhiloxTest, KnownAnswerAllOnes) {
  EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
}

TEST(PhiloxTest, KnownAnswerPiDigits) {
  EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

std::vector<std::uint64_t> first_outputs(RngStream rng, int count) {
  std::vector<std::uint64_t> out(count);
  for (auto& x : out) x = rng();
  return out;
}

TEST(RngStreamTest, SamePairIsBitIdentical) {
  EXPECT_EQ(first_outputs(RngStream(5, 9), 1000), first_outputs(RngStream(5, 9), 1000));
}

TEST(RngStreamTest, DistinctPairsDiffer) {
  EXPECT_NE(first_outputs(RngStream(5, 9), 100), first_outputs(RngStream(5, 10), 100));
  EXPECT_NE(first_outputs(RngStream(5, 9), 100), first_outputs(RngStream(6, 9), 100));
}

TEST(RngStreamTest, UniformIsOpenInterval) {
  RngStream rng(1, 2);
  double sum = 0.0;
  constexpr int kDraws = 200000;
  for (int i = 0; i < kDraws; ++i) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / kDraws, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / kDraws));
}

TEST(RngStreamTest, NormalMoments) {
  RngStream rng(3, 4);
  constexpr int kDraws = 400000;
  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double z = rng.normal();
    s1 += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  EXPECT_NEAR(s1 / kDraws, 0.0, 4.0 / std::sqrt(kDraws));
  EXPECT_NEAR(s2 / kDraws, 1.0, 4.0 * std::sqrt(2.0 / kDraws));
  EXPECT_NEAR(s4 / kDraws, 3.0, 4.0 * std::sqrt(96.0 / kDraws));
}

TEST(DeriveStreamTest, Deterministic) {
  EXPECT_EQ(first_outputs(derive_stream(7, {1, 2, 3}), 100),
            first_outputs(derive_stream(7, {1, 2, 3}), 100));
}

TEST(DeriveStreamTest, LabelsSeparateStreams) {
  EXPECT_NE(first_outputs(derive_stream(7, {1}), 100), first_outputs(derive_stream(7, {2}), 100));
  EXPECT_NE(derive_stream(7, {1, 2}).stream_id(), derive_stream(7, {2, 1}).stream_id());
  EXPECT_NE(derive_stream(7, {0}).stream_id(), derive_stream(7, {0, 0}).stream_id());
}

TEST(DeriveStreamTest, SpanAndListAgree) {
  const std::vector<std::uint64_t> labels{4, 5, 6};
  EXPECT_EQ(derive_stream(9, labels).stream_id(), derive_stream(9, {4, 5, 6}).stream_id());
}

TEST(DeriveStreamTest, ReplicateStreamsHaveDistinctFirstOutputs) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t r = 0; r < 1000; ++r) {
    RngStream rng = derive_stream(kDefaultSeed, {1, 200, 2, 3, 0, r});
    seen.insert(rng());
  }
  EXPECT_EQ(seen.size(), 1000u);
}

}  // namespace
}  // namespace sphloc
