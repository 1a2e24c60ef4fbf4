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
#pragma once

// Reference solvers: full dynamic programming, the improved variant that
// skips sizes above 2n/3, and exhaustive enumeration of set partitions.

#include "csg/cdp.hpp"
#include "csg/core.hpp"
#include "csg/offline.hpp"
#include "csg/search_state.hpp"

#include <cstdio>
#include <iostream>
#include <vector>

namespace csg {

inline constexpr int kBruteForceCap = 13;

/// Every size 2..n.
inline SolverResult dp_solve(CharacteristicFunction const &v, SolveOptions const &opts = {})
{
  auto const  start = StopControl::Clock::now();
  StopControl stop(opts.deadline());
  DpTables    t(v);
  DpPass      pass(v, t, SizeSet::all(v.agents()));
  bool const  ok = pass.run(&stop);
  SolverStats stats;
  stats.splits_evaluated = pass.splits();
  stats.pass_splits      = {pass.splits()};
  return detail::finish_result(pass.best_structure(), v, std::move(stats), ok, start);
}

/// {2, ..., floor(2n/3)} plus n. If the floor ever fails to reach every
/// subspace the ceiling is used instead and a note goes to stderr.
inline SizeSet idp_size_set(int n)
{
  check_agent_count(n);
  auto make = [n](int top) {
    std::vector<int> sizes;
    for (int s = 2; s <= top && s < n; ++s)
    {
      sizes.push_back(s);
    }
    return SizeSet::from_sizes(n, sizes);
  };
  SizeSet floor_set = make((2 * n) / 3);
  if (partition_graph(n).reachable(floor_set.labels()).full())
  {
    return floor_set;
  }
  std::cerr << "idp: floor(2n/3) misses subspaces for n=" << n << ", using ceil\n";
  return make((2 * n + 2) / 3);
}

inline SolverResult idp_solve(CharacteristicFunction const &v, SolveOptions const &opts = {})
{
  auto const  start = StopControl::Clock::now();
  StopControl stop(opts.deadline());
  DpTables    t(v);
  DpPass      pass(v, t, idp_size_set(v.agents()));
  bool const  ok = pass.run(&stop);
  SolverStats stats;
  stats.splits_evaluated = pass.splits();
  stats.pass_splits      = {pass.splits()};
  return detail::finish_result(pass.best_structure(), v, std::move(stats), ok, start);
}

/// Visits every set partition once via restricted-growth strings.
inline SolverResult brute_force_solve(CharacteristicFunction const &v, SolveOptions const &opts = {})
{
  auto const start = StopControl::Clock::now();
  int const  n     = v.agents();
  if (n > kBruteForceCap)
  {
    throw ArgumentError("brute force refuses n > " + std::to_string(kBruteForceCap));
  }
  StopControl stop(opts.deadline());

  // a[i] = block of agent i; block masks kept incrementally
  std::vector<int>  a(static_cast<std::size_t>(n), 0);
  std::vector<int>  maxprefix(static_cast<std::size_t>(n), 0);
  std::vector<Mask> blocks(static_cast<std::size_t>(n), 0);
  std::vector<Mask> best_blocks;
  double            best  = -std::numeric_limits<double>::infinity();
  std::uint64_t     count = 0;
  bool              ok    = true;

  // iterative RGS enumeration in lexicographic order
  for (int i = 0; i < n; ++i)
  {
    blocks[0] |= Mask{1} << i;
  }
  for (;;)
  {
    ++count;
    if ((count & 4095u) == 0 && stop.stop_requested())
    {
      ok = false;
      break;
    }
    int const nb  = n == 0 ? 0 : maxprefix[static_cast<std::size_t>(n - 1)] + 1;
    double    val = 0.0;
    for (int b = 0; b < nb; ++b)
    {
      val += v[blocks[static_cast<std::size_t>(b)]];
    }
    if (val > best)
    {
      best        = val;
      best_blocks.assign(blocks.begin(), blocks.begin() + nb);
    }
    // next string: bump the rightmost position that can grow
    int i = n - 1;
    while (i > 0 && a[static_cast<std::size_t>(i)] > maxprefix[static_cast<std::size_t>(i - 1)])
    {
      --i;
    }
    if (i <= 0)
    {
      break;
    }
    for (int j = i; j < n; ++j)
    {
      blocks[static_cast<std::size_t>(a[static_cast<std::size_t>(j)])] &= ~(Mask{1} << j);
    }
    ++a[static_cast<std::size_t>(i)];
    maxprefix[static_cast<std::size_t>(i)] =
        std::max(maxprefix[static_cast<std::size_t>(i - 1)], a[static_cast<std::size_t>(i)]);
    blocks[static_cast<std::size_t>(a[static_cast<std::size_t>(i)])] |= Mask{1} << i;
    for (int j = i + 1; j < n; ++j)
    {
      a[static_cast<std::size_t>(j)]         = 0;
      maxprefix[static_cast<std::size_t>(j)] = maxprefix[static_cast<std::size_t>(j - 1)];
      blocks[0] |= Mask{1} << j;
    }
  }

  CoalitionStructure cs;
  for (Mask m : best_blocks)
  {
    cs.coalitions.push_back(Coalition{m});
  }
  SolverStats stats;
  stats.structures_enumerated = count;
  return detail::finish_result(std::move(cs), v, std::move(stats), ok, start);
}

/// Tuning used above the exact-tuning cap: both passes and the single
/// gradual process run the improved-DP size set.
inline TuningResult idp_fallback_tuning(int n)
{
  TuningResult tr;
  tr.n          = n;
  tr.cost_model = CostModel::unit(n);
  SizeSet const s = idp_size_set(n);
  tr.cdp_pair     = {s, s};
  tr.grad         = {{1.0, s}};
  return tr;
}

}  // namespace csg
