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

// Gradual search: several DP processes, one per coverage fraction, filling a
// shared table and pruning subspaces as soon as they are connected to the
// bottom node or bounded by the incumbent.

#include "csg/cdp.hpp"
#include "csg/core.hpp"
#include "csg/offline.hpp"
#include "csg/partition_graph.hpp"
#include "csg/search_state.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace csg {

/// State shared by every gradual process working on one instance.
class GradState
{
public:
  explicit GradState(CharacteristicFunction const &v)
    : maxes_(size_max_table(v))
    , tables_(v)
    , queue_(partition_graph(v.agents()), maxes_)
  {}

  GradState(GradState const &)            = delete;
  GradState &operator=(GradState const &) = delete;

  [[nodiscard]] PartitionGraph const &graph() const { return queue_.graph(); }
  [[nodiscard]] SizeMaxTable const   &maxes() const { return maxes_; }
  DpTables                           &tables() { return tables_; }
  SubspaceQueue                      &queue() { return queue_; }
  Incumbent                          &incumbent() { return incumbent_; }

  /// Split labels some process has fully evaluated so far.
  [[nodiscard]] SplitLabels edges() const { return edges_.load(std::memory_order_acquire); }

  std::vector<SizeSet> active_sets;

  [[nodiscard]] PassContext context() { return {&queue_, &incumbent_, &edges_}; }

private:
  SizeMaxTable             maxes_;
  DpTables                 tables_;
  SubspaceQueue            queue_;
  Incumbent                incumbent_;
  std::atomic<SplitLabels> edges_{0};
};

namespace detail {

inline SolverResult incumbent_result(Incumbent const &inc, SubspaceQueue const &queue,
                                     CharacteristicFunction const &v, SolverStats stats,
                                     StopControl::Clock::time_point start)
{
  auto [value, cs] = inc.snapshot();
  if (!inc.has_structure())
  {
    // stopped before any engine published: fall back to the grand coalition
    cs = CoalitionStructure{{grand_coalition(v.agents())}};
  }
  queue.fill_stats(stats);
  return finish_result(cs, v, std::move(stats), queue.complete(), start);
}

}  // namespace detail

/// One gradual process: evaluates `sizes` in ascending order on the shared
/// tables, pruning after every size. Stops early once every subspace is
/// accounted for.
inline SolverResult search_process(CharacteristicFunction const &v, SizeSet const &sizes, GradState &state,
                                   StopControl const *stop = nullptr)
{
  auto const start = StopControl::Clock::now();
  DpPass     pass(v, state.tables(), sizes, state.context());
  pass.run(stop);
  SolverStats stats;
  stats.splits_evaluated = pass.splits();
  stats.pass_splits      = {pass.splits()};
  return detail::incumbent_result(state.incumbent(), state.queue(), v, std::move(stats), start);
}

/// Runs one process per distinct set against a single shared state. At least
/// one set must reach every subspace, otherwise completeness is unprovable
/// without a subspace search alongside.
inline SolverResult grad_solve(CharacteristicFunction const &v, std::vector<SizeSet> sets,
                               SolveOptions const &opts = {})
{
  auto const start = StopControl::Clock::now();
  std::vector<SizeSet> distinct;
  for (auto const &s : sets)
  {
    if (s.n != v.agents())
    {
      throw ArgumentError("size set is for a different n");
    }
    if (std::find(distinct.begin(), distinct.end(), s) == distinct.end())
    {
      distinct.push_back(s);
    }
  }
  auto const &graph = partition_graph(v.agents());
  bool const  complete =
      std::any_of(distinct.begin(), distinct.end(), [&](SizeSet const &s) { return graph.reachable(s.labels()).full(); });
  if (!complete)
  {
    throw PreconditionError("no gradual size set reaches every subspace; add a full-coverage set");
  }

  GradState state(v);
  state.active_sets = distinct;
  StopControl stop(opts.deadline());

  std::vector<std::unique_ptr<DpPass>> passes;
  for (auto const &s : distinct)
  {
    passes.push_back(std::make_unique<DpPass>(v, state.tables(), s, state.context()));
  }

  if (opts.threads >= 2 && !opts.deterministic)
  {
    std::vector<std::jthread> workers;
    for (auto &p : passes)
    {
      workers.emplace_back([&stop, pass = p.get()] { pass->run(&stop); });
    }
  }
  else
  {
    bool progressed = true;
    while (progressed && !state.queue().complete() && !stop.stop_requested())
    {
      progressed = false;
      for (auto &p : passes)
      {
        if (!p->done())
        {
          p->step(&stop);
          progressed = true;
        }
      }
    }
  }

  SolverStats stats;
  for (auto const &p : passes)
  {
    stats.pass_splits.push_back(p->splits());
    stats.splits_evaluated += p->splits();
  }
  return detail::incumbent_result(state.incumbent(), state.queue(), v, std::move(stats), start);
}

}  // namespace csg
