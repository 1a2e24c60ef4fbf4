//------------------------------------------------------------------------------
//
//   Copyright 2026 The csg Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "csg/core.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace csg;

TEST(CoalitionsOfSize, GrandCoalitionOnly)
{
  auto cs = coalitions_of_size(4, 4);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].mask, 0b1111u);
}

TEST(CoalitionsOfSize, PairsOfFourAscending)
{
  std::vector<Mask> masks;
  for (auto c : coalitions_of_size(4, 2))
  {
    masks.push_back(c.mask);
  }
  EXPECT_EQ(masks, (std::vector<Mask>{0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100}));
}

TEST(CoalitionsOfSize, CountsMatchBinomialAndOrder)
{
  EXPECT_EQ(coalitions_of_size(10, 4).size(), 210u);
  for (int n = 1; n <= 12; ++n)
  {
    for (int s = 1; s <= n; ++s)
    {
      auto cs = coalitions_of_size(n, s);
      EXPECT_EQ(cs.size(), static_cast<std::size_t>(oracle::binom(n, s))) << n << "," << s;
      for (std::size_t i = 0; i < cs.size(); ++i)
      {
        EXPECT_EQ(cs[i].size(), s);
        if (i > 0)
        {
          EXPECT_LT(cs[i - 1].mask, cs[i].mask);
        }
      }
    }
  }
}

TEST(CoalitionsOfSize, RejectsBadArguments)
{
  EXPECT_THROW(coalitions_of_size(4, 0), ArgumentError);
  EXPECT_THROW(coalitions_of_size(4, 5), ArgumentError);
  EXPECT_THROW(coalitions_of_size(31, 2), ArgumentError);
  EXPECT_THROW(coalitions_of_size(0, 0), ArgumentError);
}

TEST(ProperSplits, SmallCases)
{
  auto two = proper_splits(Coalition{0b11});
  ASSERT_EQ(two.size(), 1u);
  EXPECT_EQ(two[0].first.mask, 0b01u);
  EXPECT_EQ(two[0].second.mask, 0b10u);

  auto three = proper_splits(Coalition{0b111});
  ASSERT_EQ(three.size(), 3u);
  std::set<std::pair<Mask, Mask>> got;
  for (auto s : three)
  {
    got.insert({s.first.mask, s.second.mask});
  }
  std::set<std::pair<Mask, Mask>> want{{0b001, 0b110}, {0b101, 0b010}, {0b011, 0b100}};
  EXPECT_EQ(got, want);
}

TEST(ProperSplits, PropertiesUpToTen)
{
  EXPECT_EQ(proper_splits(Coalition{0x3FF}).size(), 511u);
  for (Mask c : {0b11u, 0b1011u, 0b110110u, 0x2F5u, 0x3FFu})
  {
    auto               splits = proper_splits(Coalition{c});
    std::set<Mask>     seen;
    Mask const         low = c & (~c + 1u);
    EXPECT_EQ(splits.size(), (std::size_t{1} << (std::popcount(c) - 1)) - 1);
    for (auto s : splits)
    {
      EXPECT_EQ(s.first.mask | s.second.mask, c);
      EXPECT_EQ(s.first.mask & s.second.mask, 0u);
      EXPECT_NE(s.first.mask, 0u);
      EXPECT_NE(s.second.mask, 0u);
      EXPECT_TRUE(s.first.mask & low);
      Mask const key = std::min(s.first.mask, s.second.mask);
      EXPECT_TRUE(seen.insert(key).second) << "split repeated under swapping";
    }
  }
}

TEST(ProperSplits, RejectsSingleton)
{
  EXPECT_THROW(proper_splits(Coalition{0b100}), ArgumentError);
}

TEST(CharacteristicFunction, ValidatesTable)
{
  EXPECT_THROW(CharacteristicFunction(2, {0.0, 1.0, 1.0}), ValidationError);
  EXPECT_THROW(CharacteristicFunction(2, {1.0, 1.0, 1.0, 1.0}), ValidationError);
  EXPECT_THROW(CharacteristicFunction(2, {0.0, 1.0, std::nan(""), 1.0}), ValidationError);
  EXPECT_THROW(CharacteristicFunction(2, {0.0, 1.0, INFINITY, 1.0}), ValidationError);
  EXPECT_NO_THROW(CharacteristicFunction(2, {0.0, 1.0, 2.0, 3.0}));
}

TEST(StructureValue, ReferenceInstance)
{
  auto const v = fixtures::r3();
  EXPECT_DOUBLE_EQ(structure_value({{Coalition{1}, Coalition{2}, Coalition{4}}}, v), 3.0);
  EXPECT_DOUBLE_EQ(structure_value({{Coalition{7}}}, v), 2.5);
  EXPECT_DOUBLE_EQ(structure_value({{Coalition{4}, Coalition{3}}}, v), 4.0);
}

TEST(StructureValue, RejectsInvalidStructures)
{
  auto const v = fixtures::r3();
  EXPECT_THROW(structure_value({{Coalition{3}, Coalition{6}}}, v), ValidationError);
  EXPECT_THROW(structure_value({{Coalition{3}}}, v), ValidationError);
  EXPECT_THROW(structure_value({{Coalition{0}, Coalition{7}}}, v), ValidationError);
}

TEST(StructureValue, OrderInvariant)
{
  auto const v = fixtures::random_integer(6, 3);
  CoalitionStructure cs{{Coalition{0b000011}, Coalition{0b001100}, Coalition{0b110000}}};
  double const       a = structure_value(cs, v);
  std::reverse(cs.coalitions.begin(), cs.coalitions.end());
  EXPECT_EQ(structure_value(cs, v), a);
  std::swap(cs.coalitions[0], cs.coalitions[1]);
  EXPECT_EQ(structure_value(cs, v), a);
}

TEST(SizeMaxTable, ReferenceAndTrivialCases)
{
  auto const m = size_max_table(fixtures::r3());
  EXPECT_DOUBLE_EQ(m[1], 1.0);
  EXPECT_DOUBLE_EQ(m[2], 3.0);
  EXPECT_DOUBLE_EQ(m[3], 2.5);

  auto const z = size_max_table(CharacteristicFunction(4));
  for (int s = 1; s <= 4; ++s)
  {
    EXPECT_EQ(z[s], 0.0);
  }

  CharacteristicFunction card(5);
  for (Mask c = 1; c < 32; ++c)
  {
    card.set(Coalition{c}, std::popcount(c));
  }
  auto const cm = size_max_table(card);
  for (int s = 1; s <= 5; ++s)
  {
    EXPECT_EQ(cm[s], s);
  }
}

TEST(SizeMaxTable, DominatesAndIsAttained)
{
  for (std::uint64_t seed = 0; seed < 5; ++seed)
  {
    auto const v = fixtures::random_integer(8, seed);
    auto const m = size_max_table(v);
    std::vector<bool> hit(9, false);
    for (Mask c = 1; c < 256; ++c)
    {
      int const s = std::popcount(c);
      EXPECT_LE(v[c], m[s]);
      hit[static_cast<std::size_t>(s)] = hit[static_cast<std::size_t>(s)] || v[c] == m[s];
    }
    for (int s = 1; s <= 8; ++s)
    {
      EXPECT_TRUE(hit[static_cast<std::size_t>(s)]);
    }
  }
}
