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

// Subspace search in descending upper-bound order. Each subspace (an integer
// partition of n) is enumerated with a depth-first branch-and-bound over
// coalitions whose sizes follow the partition's parts, smallest first.

#include "csg/cdp.hpp"
#include "csg/core.hpp"
#include "csg/partition_graph.hpp"
#include "csg/search_state.hpp"

#include <atomic>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

namespace csg {

struct RankedSubspace
{
  IntegerPartition partition;
  double           upper_bound;
};

/// Descending upper bound; equal bounds fall back to partition order.
inline std::vector<RankedSubspace> order_subspaces(std::vector<IntegerPartition> const &partitions,
                                                   SizeMaxTable const                  &maxes)
{
  std::vector<RankedSubspace> out;
  out.reserve(partitions.size());
  for (auto const &p : partitions)
  {
    out.push_back({p, subspace_upper_bound(p, maxes)});
  }
  std::stable_sort(out.begin(), out.end(), [](auto const &a, auto const &b) {
    if (a.upper_bound != b.upper_bound)
    {
      return a.upper_bound > b.upper_bound;
    }
    return a.partition.parts < b.partition.parts;
  });
  return out;
}

struct SubspaceSearchOptions
{
  /// With pruning off every matching structure is visited.
  bool prune{true};
  /// Shared incumbent consulted during the search, if any.
  Incumbent const *live{nullptr};
  /// Polled periodically; returning true abandons the search.
  std::function<bool()> abort;
};

struct SubspaceSearchResult
{
  std::optional<double> value;  // best value strictly above the incumbent
  CoalitionStructure    structure;
  std::uint64_t         nodes_expanded{0};
  std::uint64_t         leaves{0};
  bool                  aborted{false};
};

namespace detail {

class SubspaceSearcher
{
public:
  SubspaceSearcher(IntegerPartition const &p, CharacteristicFunction const &v, SizeMaxTable const &maxes,
                   double incumbent, SubspaceSearchOptions const &opts)
    : parts_(p.parts)
    , v_(v)
    , opts_(opts)
    , best_(incumbent)
    , chosen_(p.parts.size())
    , best_chosen_(p.parts.size())
  {
    suffix_max_.assign(parts_.size() + 1, 0.0);
    for (std::size_t d = parts_.size(); d-- > 0;)
    {
      suffix_max_[d] = suffix_max_[d + 1] + maxes[parts_[d]];
    }
  }

  SubspaceSearchResult run()
  {
    if (p_total() != v_.agents())
    {
      throw ArgumentError("partition does not sum to the agent count");
    }
    dfs(0, grand_mask(v_.agents()), 0.0, -1);
    res_.aborted = aborted_;
    if (found_)
    {
      res_.value = best_;
      res_.structure.coalitions.clear();
      for (Mask m : best_chosen_)
      {
        res_.structure.coalitions.push_back(Coalition{m});
      }
      res_.structure = res_.structure.canonical();
    }
    return res_;
  }

private:
  int p_total() const
  {
    int t = 0;
    for (int x : parts_)
    {
      t += x;
    }
    return t;
  }

  double threshold() const
  {
    if (opts_.live)
    {
      return std::max(best_, opts_.live->value());
    }
    return best_;
  }

  bool should_abort()
  {
    if (aborted_)
    {
      return true;
    }
    if (opts_.abort && (++polls_ & 1023u) == 0 && opts_.abort())
    {
      aborted_ = true;
    }
    return aborted_;
  }

  /// Visits a complete coalition at depth d. Returns false to stop the search.
  void visit(std::size_t d, Mask c, Mask remaining, double partial, int min_agent)
  {
    double const val = partial + v_[c];
    if (opts_.prune && val + suffix_max_[d + 1] < threshold())
    {
      return;
    }
    ++res_.nodes_expanded;
    chosen_[d] = c;
    if (d + 1 == parts_.size())
    {
      ++res_.leaves;
      if (val > threshold())
      {
        best_        = val;
        found_       = true;
        best_chosen_ = chosen_;
      }
      return;
    }
    dfs(d + 1, remaining ^ c, val, min_agent);
  }

  void dfs(std::size_t d, Mask remaining, double partial, int prev_min)
  {
    if (should_abort())
    {
      return;
    }
    int const  s        = parts_[d];
    bool const same_run = d > 0 && parts_[d] == parts_[d - 1];
    // Equal-size coalitions are ordered by their lowest member.
    int const lower = same_run ? prev_min + 1 : 0;

    if (d + 1 == parts_.size())
    {
      int const m = std::countr_zero(remaining);
      if (m >= lower)
      {
        visit(d, remaining, remaining, partial, m);
      }
      return;
    }

    std::vector<int> pool;
    for (Mask r = remaining; r != 0; r &= r - 1)
    {
      pool.push_back(std::countr_zero(r));
    }
    for (std::size_t i = 0; i < pool.size(); ++i)
    {
      int const m = pool[i];
      if (m < lower)
      {
        continue;
      }
      // every later coalition of this run needs a larger lowest member
      std::size_t const above = pool.size() - i - 1;
      if (above + 1 < static_cast<std::size_t>(s))
      {
        break;
      }
      choose(d, remaining, partial, m, Mask{1} << m, pool, i + 1, s - 1);
      if (aborted_)
      {
        return;
      }
    }
  }

  void choose(std::size_t d, Mask remaining, double partial, int min_agent, Mask acc,
              std::vector<int> const &pool, std::size_t from, int need)
  {
    if (need == 0)
    {
      visit(d, acc, remaining, partial, min_agent);
      return;
    }
    for (std::size_t j = from; j + static_cast<std::size_t>(need) <= pool.size(); ++j)
    {
      choose(d, remaining, partial, min_agent, acc | (Mask{1} << pool[j]), pool, j + 1, need - 1);
      if (aborted_)
      {
        return;
      }
    }
  }

  std::vector<int>              parts_;
  CharacteristicFunction const &v_;
  SubspaceSearchOptions const  &opts_;
  std::vector<double>           suffix_max_;
  double                        best_;
  bool                          found_{false};
  bool                          aborted_{false};
  std::uint64_t                 polls_{0};
  std::vector<Mask>             chosen_;
  std::vector<Mask>             best_chosen_;
  SubspaceSearchResult          res_;
};

}  // namespace detail

/// Branch-and-bound over every structure whose coalition sizes match `p`.
/// A branch is cut when partial value + Σ Max of the remaining parts is
/// strictly below the incumbent. Returns the best structure strictly above
/// the incumbent, if any.
inline SubspaceSearchResult search_subspace(IntegerPartition const &p, CharacteristicFunction const &v,
                                            SizeMaxTable const &maxes, double incumbent,
                                            SubspaceSearchOptions const &opts = {})
{
  return detail::SubspaceSearcher(p, v, maxes, incumbent, opts).run();
}

/// Counters accumulated by subspace searchers across threads.
struct DipsCounters
{
  std::atomic<std::uint64_t> nodes_expanded{0};
  std::atomic<std::uint64_t> leaves{0};
};

/// Claims and searches one subspace. Returns false once the queue is exhausted.
inline bool dips_step(SubspaceQueue &queue, CharacteristicFunction const &v, SizeMaxTable const &maxes,
                      Incumbent &incumbent, StopControl const *stop, DipsCounters &counters)
{
  auto idx = queue.claim_next(incumbent.value());
  if (!idx)
  {
    return false;
  }
  SubspaceSearchOptions opts;
  opts.live  = &incumbent;
  opts.abort = [&, i = *idx] {
    return (stop && stop->stop_requested()) || queue.state(i) != SubspaceState::claimed;
  };
  auto res = search_subspace(queue.graph().node(*idx), v, maxes, incumbent.value(), opts);
  counters.nodes_expanded.fetch_add(res.nodes_expanded, std::memory_order_relaxed);
  counters.leaves.fetch_add(res.leaves, std::memory_order_relaxed);
  if (res.value)
  {
    incumbent.offer(structure_value(res.structure, v), res.structure);
  }
  if (!res.aborted)
  {
    queue.mark_searched(*idx);
  }
  return true;
}

/// Worker loop: claim, search, repeat until the queue runs dry or a stop is
/// requested.
inline void dips_worker(SubspaceQueue &queue, CharacteristicFunction const &v, SizeMaxTable const &maxes,
                        Incumbent &incumbent, StopControl const *stop, DipsCounters &counters)
{
  while (!(stop && stop->stop_requested()) && !queue.complete())
  {
    if (!dips_step(queue, v, maxes, incumbent, stop, counters))
    {
      return;
    }
  }
}

/// Runs DIPS alone with `opts.threads` workers against a prepared queue and
/// incumbent. The queue must be built for v's agent count.
inline SolverResult dips_run(SubspaceQueue &queue, CharacteristicFunction const &v, SizeMaxTable const &maxes,
                             Incumbent &incumbent, SolveOptions const &opts = {})
{
  auto const   start = StopControl::Clock::now();
  StopControl  stop(opts.deadline());
  DipsCounters counters;
  int const    workers = std::max(1, opts.deterministic ? 1 : opts.threads);
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w)
    {
      pool.emplace_back([&] { dips_worker(queue, v, maxes, incumbent, &stop, counters); });
    }
    dips_worker(queue, v, maxes, incumbent, &stop, counters);
  }
  SolverResult r;
  auto [value, cs] = incumbent.snapshot();
  r.structure      = cs;
  r.value          = incumbent.has_structure() ? structure_value(cs, v) : value;
  r.optimal        = queue.complete();
  queue.fill_stats(r.stats);
  r.stats.bnb_nodes_expanded = counters.nodes_expanded.load();
  r.stats.bnb_leaves         = counters.leaves.load();
  r.stats.elapsed_ns =
      std::chrono::duration_cast<std::chrono::nanoseconds>(StopControl::Clock::now() - start).count();
  return r;
}

/// Convenience: DIPS alone on a fresh queue, starting from no incumbent.
inline SolverResult dips_solve(CharacteristicFunction const &v, SolveOptions const &opts = {})
{
  auto const   maxes = size_max_table(v);
  SubspaceQueue queue(partition_graph(v.agents()), maxes);
  Incumbent     incumbent;
  return dips_run(queue, v, maxes, incumbent, opts);
}

}  // namespace csg
