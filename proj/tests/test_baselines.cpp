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

#include "csg/baselines.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace csg;

TEST(DpSolve, Examples)
{
  EXPECT_DOUBLE_EQ(dp_solve(fixtures::r3()).value, 4.0);

  CharacteristicFunction zero(4);
  auto const             z = dp_solve(zero);
  EXPECT_DOUBLE_EQ(z.value, 0.0);
  ASSERT_EQ(z.structure.coalitions.size(), 1u);
  EXPECT_EQ(z.structure.coalitions[0], grand_coalition(4));

  auto const r = dp_solve(fixtures::random_integer(10, 1));
  EXPECT_EQ(r.stats.splits_evaluated, 28501u);
  double const closed = (std::pow(3.0, 10) - std::pow(2.0, 11) + 1) / 2;
  EXPECT_EQ(static_cast<double>(r.stats.splits_evaluated), closed);
}

TEST(IdpSizeSet, Examples)
{
  EXPECT_EQ(idp_size_set(12), SizeSet::from_sizes(12, {2, 3, 4, 5, 6, 7, 8}));
  EXPECT_EQ(idp_size_set(10), SizeSet::from_sizes(10, {2, 3, 4, 5, 6}));
  EXPECT_EQ(idp_size_set(4), SizeSet::from_sizes(4, {2}));
}

TEST(IdpSizeSet, ReachesEverySubspace)
{
  for (int n = 4; n <= 18; ++n)
  {
    auto const s     = idp_size_set(n);
    auto const sizes = s.sizes();
    std::set<int> allowed(sizes.begin(), sizes.end());
    allowed.erase(n);
    EXPECT_EQ(oracle::reachable(n, allowed).size(), oracle::partition_count(n)) << n;
    EXPECT_EQ(s, SizeSet::from_sizes(n, [&] {
                std::vector<int> v;
                for (int k = 2; k <= 2 * n / 3 && k < n; ++k)
                {
                  v.push_back(k);
                }
                return v;
              }()))
        << "floor rounding fell back at n=" << n;
  }
}

TEST(IdpSizeSet, TunedPairNeverSlowerThanIdp)
{
  for (int n = 4; n <= 18; ++n)
  {
    auto const cm   = CostModel::unit(n);
    auto const pair = ssd_tune(n, cm);
    EXPECT_LE(std::max(set_time(pair.first, cm), set_time(pair.second, cm)), set_time(idp_size_set(n), cm)) << n;
  }
}

TEST(IdpSolve, SplitCountMatchesSetTime)
{
  auto const r = idp_solve(fixtures::random_integer(10, 5));
  EXPECT_DOUBLE_EQ(static_cast<double>(r.stats.splits_evaluated), set_time(idp_size_set(10), CostModel::unit(10)));
  EXPECT_DOUBLE_EQ(idp_solve(fixtures::r3()).value, 4.0);
}

TEST(BruteForce, VisitsBellManyStructures)
{
  for (int n = 1; n <= 10; ++n)
  {
    auto const r = brute_force_solve(fixtures::random_integer(n, 1));
    EXPECT_EQ(r.stats.structures_enumerated, oracle::bell(n)) << n;
  }
  EXPECT_EQ(brute_force_solve(fixtures::r3()).stats.structures_enumerated, 5u);
  EXPECT_EQ(brute_force_solve(CharacteristicFunction(4)).stats.structures_enumerated, 15u);
}

TEST(BruteForce, ThreeAgentReference)
{
  auto const r = brute_force_solve(fixtures::r3());
  EXPECT_DOUBLE_EQ(r.value, 4.0);
  EXPECT_EQ(r.structure.coalitions, (std::vector<Coalition>{Coalition{0b011}, Coalition{0b100}}));
}

TEST(BruteForce, RefusesLargeN)
{
  EXPECT_THROW(brute_force_solve(CharacteristicFunction(14)), ArgumentError);
}

TEST(Baselines, AgreeWithOracle)
{
  for (int n = 1; n <= 11; ++n)
  {
    for (std::uint64_t seed = 0; seed < 3; ++seed)
    {
      auto const   v    = fixtures::random_integer(n, 1000 * seed + static_cast<std::uint64_t>(n));
      double const best = oracle::best_structure(v).value;
      EXPECT_DOUBLE_EQ(dp_solve(v).value, best) << n;
      EXPECT_DOUBLE_EQ(brute_force_solve(v).value, best) << n;
      if (n >= 4)
      {
        EXPECT_DOUBLE_EQ(idp_solve(v).value, best) << n;
      }
    }
  }
}
