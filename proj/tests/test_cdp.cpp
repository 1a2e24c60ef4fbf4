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

#include "csg/cdp.hpp"
#include "csg/offline.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace csg;

namespace {

CoalitionStructure cs_of(std::initializer_list<Mask> masks)
{
  CoalitionStructure cs;
  for (Mask m : masks)
  {
    cs.coalitions.push_back(Coalition{m});
  }
  return cs.canonical();
}

std::set<int> as_set(SizeSet const &s)
{
  auto v = s.sizes();
  return {v.begin(), v.end()};
}

}  // namespace

TEST(EvaluateSizes, ThreeAgentReference)
{
  auto const v = fixtures::r3();
  {
    DpTables t(v);
    auto     r = evaluate_sizes(t, v, SizeSet::from_sizes(3, {2}));
    EXPECT_DOUBLE_EQ(r.value, 4.0);
    EXPECT_EQ(r.structure.canonical(), cs_of({0b011, 0b100}));
    EXPECT_DOUBLE_EQ(t.value(0b011), 3.0);
  }
  {
    DpTables t(v);
    auto     r = evaluate_sizes(t, v, SizeSet::from_sizes(3, {}));
    EXPECT_DOUBLE_EQ(r.value, 4.0);
    EXPECT_EQ(r.splits, 3u);
  }
}

TEST(EvaluateSizes, TiesKeepCoalitionsWhole)
{
  CharacteristicFunction v(4);
  DpTables               t(v);
  auto                   r = evaluate_sizes(t, v, SizeSet::all(4));
  EXPECT_DOUBLE_EQ(r.value, 0.0);
  EXPECT_EQ(r.structure.canonical(), cs_of({0b1111}));
  for (Mask m = 1; m < 16; ++m)
  {
    EXPECT_EQ(t.first_part(m), 0u);
  }
}

TEST(EvaluateSizes, MatchesRecursiveOracle)
{
  for (int n = 3; n <= 8; ++n)
  {
    for (std::uint32_t bits = 0; bits < (1u << (n - 2)); ++bits)
    {
      auto const v = fixtures::random_integer(n, 100 * n + bits);
      SizeSet    s{n, bits};
      DpTables   t(v);
      auto       r = evaluate_sizes(t, v, s);
      std::map<std::uint32_t, double> memo;
      EXPECT_DOUBLE_EQ(r.value, oracle::pass_value(v, as_set(s), grand_mask(n), memo)) << n << " " << s;
      EXPECT_DOUBLE_EQ(structure_value(r.structure, v), r.value);
      validate_structure(r.structure, n);
    }
  }
}

TEST(EvaluateSizes, SplitCounterMatchesClosedForm)
{
  for (int n = 2; n <= 12; ++n)
  {
    auto const    v = fixtures::random_integer(n, static_cast<std::uint64_t>(n));
    DpTables      t(v);
    auto const    s = SizeSet::all(n);
    std::uint64_t expect = 0;
    for (int k : s.evaluation_order())
    {
      expect += split_eval_count(n, k);
    }
    EXPECT_EQ(evaluate_sizes(t, v, s).splits, expect);
  }
}

TEST(EvaluateSizes, RejectsMismatchedInputs)
{
  auto const v = fixtures::r3();
  DpTables   t(v);
  EXPECT_THROW(DpPass(v, t, SizeSet::from_sizes(4, {2})), ArgumentError);
  DpTables empty;
  EXPECT_THROW(DpPass(v, empty, SizeSet::from_sizes(3, {2})), StateError);
}

TEST(ExtractPartition, Examples)
{
  std::vector<Mask> first(8, 0);
  first[0b111] = 0b011;
  first[0b011] = 0;
  EXPECT_EQ(extract_partition(Coalition{0b111}, first), cs_of({0b011, 0b100}));

  std::vector<Mask> four(16, 0);
  four[0b1111] = 0b0011;
  four[0b0011] = 0b0001;
  EXPECT_EQ(extract_partition(Coalition{0b1111}, four), cs_of({0b0001, 0b0010, 0b1100}));
}

TEST(ExtractPartition, CorruptTablesRaise)
{
  std::vector<Mask> bad(16, 0);
  bad[0b1111] = 0b10000;
  EXPECT_THROW(extract_partition(Coalition{0b1111}, bad), InternalError);
  std::vector<Mask> self(16, 0);
  self[0b0011] = 0b0011;
  EXPECT_THROW(extract_partition(Coalition{0b0011}, self), InternalError);
}

TEST(CdpSolve, ThreeAgentReference)
{
  auto const v    = fixtures::r3();
  auto const pair = std::make_pair(SizeSet::from_sizes(3, {2}), SizeSet::from_sizes(3, {2}));
  auto const r    = cdp_solve(v, pair);
  EXPECT_DOUBLE_EQ(r.value, 4.0);
  EXPECT_EQ(r.structure, cs_of({0b011, 0b100}));
  EXPECT_TRUE(r.optimal);
}

TEST(CdpSolve, SingleAgent)
{
  CharacteristicFunction v(1, {0.0, 7.5});
  auto const             r = cdp_solve(v, {SizeSet::all(1), SizeSet::all(1)});
  EXPECT_DOUBLE_EQ(r.value, 7.5);
  EXPECT_EQ(r.structure, cs_of({0b1}));
}

TEST(CdpSolve, MatchesBruteForce)
{
  for (int n = 4; n <= 11; ++n)
  {
    auto const pair = ssd_tune(n, CostModel::unit(n));
    for (std::uint64_t seed = 0; seed < 3; ++seed)
    {
      auto const v = fixtures::random_integer(n, seed * 31 + static_cast<std::uint64_t>(n));
      auto const r = cdp_solve(v, pair);
      EXPECT_DOUBLE_EQ(r.value, oracle::best_structure(v).value) << n << " " << seed;
      EXPECT_DOUBLE_EQ(structure_value(r.structure, v), r.value);
      validate_structure(r.structure, n);
    }
  }
}

TEST(CdpSolve, ReferenceTenAgentPair)
{
  auto const v    = fixtures::random_integer(10, 2024);
  auto const pair = std::make_pair(SizeSet::from_sizes(10, {2, 4, 6}), SizeSet::from_sizes(10, {2, 8}));
  EXPECT_DOUBLE_EQ(cdp_solve(v, pair).value, oracle::best_structure(v).value);
}

TEST(CdpSolve, ConcurrentAndSequentialAgree)
{
  auto const v    = fixtures::random_integer(12, 5);
  auto const pair = ssd_tune(12, CostModel::unit(12));
  SolveOptions seq;
  seq.deterministic = true;
  SolveOptions par;
  par.threads = 2;
  auto const a = cdp_solve(v, pair, seq);
  auto const b = cdp_solve(v, pair, par);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.structure, b.structure);
  EXPECT_EQ(a.stats.pass_splits, b.stats.pass_splits);
}

TEST(CdpSolve, RefusesNonCoveringPair)
{
  auto const v    = fixtures::random_integer(6, 1);
  auto const none = SizeSet::from_sizes(6, {});
  EXPECT_THROW(cdp_solve(v, {none, none}), PreconditionError);
  EXPECT_THROW(cdp_solve(v, {SizeSet::all(5), SizeSet::all(5)}), ArgumentError);
}

TEST(DpTables, ImproveIsStrictlyMonotone)
{
  auto const v = fixtures::r3();
  DpTables   t(v);
  EXPECT_FALSE(t.try_improve(0b011, 3.0, 0b001));
  EXPECT_TRUE(t.try_improve(0b011, 3.5, 0b001));
  EXPECT_FALSE(t.try_improve(0b011, 3.2, 0b010));
  EXPECT_DOUBLE_EQ(t.value(0b011), 3.5);
  EXPECT_EQ(t.first_part(0b011), 0b001u);
}
