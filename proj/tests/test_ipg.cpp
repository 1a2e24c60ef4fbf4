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

#include "csg/offline.hpp"
#include "csg/partition_graph.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

using namespace csg;

namespace {

std::set<oracle::Parts> as_set(std::vector<IntegerPartition> const &ps)
{
  std::set<oracle::Parts> out;
  for (auto const &p : ps)
  {
    out.insert(p.parts);
  }
  return out;
}

std::set<int> sizes_of(SizeSet const &s)
{
  auto v = s.sizes();
  return {v.begin(), v.end()};
}

}  // namespace

TEST(IntegerPartitions, FourAgentGraph)
{
  auto ps = integer_partitions(4);
  std::vector<std::string> got;
  for (auto const &p : ps)
  {
    got.push_back(p.to_string());
  }
  EXPECT_EQ(got, (std::vector<std::string>{"[4]", "[1,3]", "[2,2]", "[1,1,2]", "[1,1,1,1]"}));
}

TEST(IntegerPartitions, SmallAndTen)
{
  auto one = integer_partitions(1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].parts, (std::vector<int>{1}));
  EXPECT_EQ(integer_partitions(10).size(), 42u);
  EXPECT_THROW(integer_partitions(0), ArgumentError);
  EXPECT_THROW(integer_partitions(31), ArgumentError);
}

TEST(IntegerPartitions, MatchOracleAndCount)
{
  for (int n = 1; n <= 25; ++n)
  {
    auto ps = integer_partitions(n);
    EXPECT_EQ(ps.size(), partition_count(n)) << n;
    if (n <= 18)
    {
      auto want = oracle::integer_partitions(n);
      EXPECT_EQ(as_set(ps), std::set<oracle::Parts>(want.begin(), want.end()));
    }
    for (std::size_t i = 1; i < ps.size(); ++i)
    {
      EXPECT_LE(ps[i - 1].level(), ps[i].level());
      if (ps[i - 1].level() == ps[i].level())
      {
        EXPECT_LT(ps[i - 1].parts, ps[i].parts);
      }
    }
  }
}

TEST(PartitionCount, KnownValues)
{
  EXPECT_EQ(partition_count(0), 1u);
  EXPECT_EQ(partition_count(1), 1u);
  EXPECT_EQ(partition_count(4), 5u);
  EXPECT_EQ(partition_count(10), 42u);
  for (int n = 0; n <= 60; ++n)
  {
    EXPECT_EQ(partition_count(n), oracle::partition_count(n)) << n;
  }
  EXPECT_EQ(partition_count(100), 190569292u);
  EXPECT_THROW(partition_count(-1), ArgumentError);
  EXPECT_THROW(partition_count(121), ArgumentError);
}

TEST(SplitChildren, Examples)
{
  auto a = split_children(IntegerPartition{4}, 4);
  EXPECT_EQ(as_set(a), (std::set<oracle::Parts>{{1, 3}, {2, 2}}));
  auto b = split_children(IntegerPartition{2, 2}, 2);
  EXPECT_EQ(as_set(b), (std::set<oracle::Parts>{{1, 1, 2}}));
  auto c = split_children(IntegerPartition{1, 9}, 9);
  EXPECT_EQ(as_set(c), (std::set<oracle::Parts>{{1, 1, 8}, {1, 2, 7}, {1, 3, 6}, {1, 4, 5}}));
  EXPECT_THROW(split_children(IntegerPartition{1, 9}, 1), ArgumentError);
  EXPECT_THROW(split_children(IntegerPartition{1, 9}, 5), ArgumentError);
}

TEST(PartitionGraph, EdgesSplitExactlyOnePart)
{
  for (int n = 1; n <= 12; ++n)
  {
    auto const &g = partition_graph(n);
    ASSERT_EQ(g.size(), partition_count(n));
    for (std::size_t i = 0; i < g.size(); ++i)
    {
      auto const &p = g.node(i);
      for (auto const &e : g.edges(i))
      {
        auto const &q = g.node(e.child);
        EXPECT_EQ(q.level(), p.level() + 1);
        std::multiset<int> rest(p.parts.begin(), p.parts.end());
        rest.erase(rest.find(static_cast<int>(e.label)));
        std::multiset<int> qs(q.parts.begin(), q.parts.end());
        for (int x : rest)
        {
          ASSERT_TRUE(qs.count(x) > 0);
          qs.erase(qs.find(x));
        }
        ASSERT_EQ(qs.size(), 2u);
        EXPECT_EQ(*qs.begin() + *qs.rbegin(), static_cast<int>(e.label));
      }
      // every child partition is an edge
      for (int x : std::set<int>(p.parts.begin(), p.parts.end()))
      {
        if (x < 2)
        {
          continue;
        }
        for (auto const &c : split_children(p, x))
        {
          bool found = false;
          for (auto const &e : g.edges(i))
          {
            found = found || (g.node(e.child) == c && static_cast<int>(e.label) == x);
          }
          EXPECT_TRUE(found) << p << " -> " << c;
        }
      }
    }
  }
}

TEST(Reachable, FourAgents)
{
  EXPECT_EQ(reachable_subspaces(4, SizeSet::from_sizes(4, {2})).size(), 5u);
  auto s3 = as_set(reachable_subspaces(4, SizeSet::from_sizes(4, {3})));
  EXPECT_EQ(s3, (std::set<oracle::Parts>{{4}, {1, 3}, {2, 2}, {1, 1, 2}}));
}

TEST(Reachable, TenAgentFigures)
{
  auto a = as_set(reachable_subspaces(10, SizeSet::from_sizes(10, {2, 4, 6})));
  EXPECT_EQ(a.size(), 39u);
  auto all  = oracle::integer_partitions(10);
  std::set<oracle::Parts> missing;
  for (auto const &p : all)
  {
    if (!a.contains(p))
    {
      missing.insert(p);
    }
  }
  EXPECT_EQ(missing, (std::set<oracle::Parts>{{1, 1, 1, 7}, {1, 2, 7}, {2, 3, 5}}));
  auto b = as_set(reachable_subspaces(10, SizeSet::from_sizes(10, {2, 8})));
  EXPECT_EQ(b.size(), 16u);
  for (auto const &p : missing)
  {
    EXPECT_TRUE(b.contains(p));
  }
}

TEST(Reachable, MatchesOracleAndIsMonotone)
{
  for (int n = 4; n <= 11; ++n)
  {
    std::uint32_t const count = 1u << (n - 2);
    for (std::uint32_t bits = 0; bits < count; ++bits)
    {
      SizeSet const s{n, bits};
      auto const    got = as_set(reachable_subspaces(n, s));
      EXPECT_EQ(got, oracle::reachable(n, sizes_of(s))) << n << " " << s;
      for (int k = 0; k < n - 2; ++k)
      {
        SizeSet const bigger{n, bits | (1u << k)};
        auto const    sup = as_set(reachable_subspaces(n, bigger));
        EXPECT_TRUE(std::includes(sup.begin(), sup.end(), got.begin(), got.end()));
      }
    }
  }
}

TEST(Reachable, FullSetReachesEverything)
{
  for (int n = 1; n <= 18; ++n)
  {
    EXPECT_EQ(reachable_subspaces(n, SizeSet::all(n)).size(), partition_count(n)) << n;
  }
}

TEST(UpperBound, Examples)
{
  SizeMaxTable m;
  m.max_by_size = {0, 2, 0, 0, 9, 10};
  EXPECT_DOUBLE_EQ(subspace_upper_bound(IntegerPartition{1, 4, 5}, m), 21.0);
  EXPECT_DOUBLE_EQ(subspace_upper_bound(IntegerPartition{5}, m), 10.0);
  auto const r3 = size_max_table(fixtures::r3());
  EXPECT_DOUBLE_EQ(subspace_upper_bound(IntegerPartition{1, 2}, r3), 4.0);
}

TEST(UpperBound, DominatesEverySubspaceStructure)
{
  for (int n = 3; n <= 9; ++n)
  {
    auto const v    = fixtures::random_integer(n, 100 + static_cast<std::uint64_t>(n));
    auto const m    = size_max_table(v);
    auto const best = oracle::best_by_subspace(v);
    for (auto const &[parts, value] : best)
    {
      EXPECT_GE(subspace_upper_bound(IntegerPartition(parts), m), value);
    }
  }
}

TEST(PartitionGraph, DotDumpLabelsSplits)
{
  std::ostringstream os;
  partition_graph(4).write_dot(os);
  auto const dot = os.str();
  EXPECT_NE(dot.find("digraph"), std::string::npos);
  EXPECT_NE(dot.find("n0 [label=\"[4]\"]"), std::string::npos) << dot;
  EXPECT_NE(dot.find("n2 [label=\"[2,2]\"]"), std::string::npos) << dot;
  EXPECT_NE(dot.find("n0 -> n1 [label=\"4\"]"), std::string::npos) << dot;
  EXPECT_NE(dot.find("n2 -> n3 [label=\"2\"]"), std::string::npos) << dot;
}
