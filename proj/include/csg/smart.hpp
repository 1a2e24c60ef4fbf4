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

// The hybrid solver. Two complementary DP passes and the gradual DP processes
// fill one shared table while a subspace search works down the upper-bound
// ordered queue; workers freed by the DP engines join the subspace search.

#include "csg/baselines.hpp"
#include "csg/cdp.hpp"
#include "csg/core.hpp"
#include "csg/dips.hpp"
#include "csg/grad.hpp"
#include "csg/offline.hpp"
#include "csg/search_state.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace csg {

//------------------------------------------------------------------------------
// Tuning lookup
//------------------------------------------------------------------------------

/// Tuning for n < 4, where there is nothing to choose: every size, everywhere.
inline TuningResult trivial_tuning(int n)
{
  TuningResult tr;
  tr.n          = n;
  tr.cost_model = CostModel::unit(n);
  tr.cdp_pair   = {SizeSet::all(n), SizeSet::all(n)};
  tr.grad       = {{1.0, SizeSet::all(n)}};
  return tr;
}

/// Unit-cost tuning with the default omegas, memoized per n. Above the exact
/// cap the improved-DP fallback is returned.
inline TuningResult const &tuning_for(int n)
{
  static std::mutex                                   mu;
  static std::map<int, std::unique_ptr<TuningResult>> cache;
  std::lock_guard<std::mutex>                         lock(mu);
  auto &slot = cache[n];
  if (!slot)
  {
    if (n < 4)
    {
      slot = std::make_unique<TuningResult>(trivial_tuning(n));
    }
    else if (n <= kExactTuningCap)
    {
      slot = std::make_unique<TuningResult>(tune_all(n, default_omegas(), CostModel::unit(n)));
    }
    else
    {
      slot = std::make_unique<TuningResult>(idp_fallback_tuning(n));
    }
  }
  return *slot;
}

//------------------------------------------------------------------------------
// Shared state and workers
//------------------------------------------------------------------------------

class SharedState
{
public:
  explicit SharedState(CharacteristicFunction const &v)
    : maxes(size_max_table(v))
    , tables(v)
    , queue(partition_graph(v.agents()), maxes)
  {}

  SharedState(SharedState const &)            = delete;
  SharedState &operator=(SharedState const &) = delete;

  [[nodiscard]] PassContext context() { return {&queue, &incumbent, &edges}; }

  SizeMaxTable             maxes;
  DpTables                 tables;
  SubspaceQueue            queue;
  Incumbent                incumbent;
  std::atomic<SplitLabels> edges{0};
  DipsCounters             dips;
};

enum class WorkerRole : std::uint8_t
{
  cdp,
  grad,
  dips,
  retired,
};

/// Role bookkeeping for the worker budget.
class WorkerPool
{
public:
  explicit WorkerPool(std::size_t workers)
    : roles_(workers, WorkerRole::dips)
  {}

  [[nodiscard]] std::size_t size() const { return roles_.size(); }

  [[nodiscard]] WorkerRole role(std::size_t w) const
  {
    std::lock_guard<std::mutex> lock(mu_);
    return roles_[w];
  }

  void assign(std::size_t w, WorkerRole r)
  {
    std::lock_guard<std::mutex> lock(mu_);
    roles_[w] = r;
  }

  [[nodiscard]] std::size_t count(WorkerRole r) const
  {
    std::lock_guard<std::mutex> lock(mu_);
    return static_cast<std::size_t>(std::count(roles_.begin(), roles_.end(), r));
  }

private:
  mutable std::mutex      mu_;
  std::vector<WorkerRole> roles_;
};

/// Re-tags a worker whose engine finished. It joins the subspace search
/// unless the queue has nothing left to hand out, in which case it retires.
inline WorkerRole handoff_worker(WorkerPool &pool, std::size_t worker, SubspaceQueue const &queue)
{
  WorkerRole const next = queue.exhausted() || queue.complete() ? WorkerRole::retired : WorkerRole::dips;
  pool.assign(worker, next);
  return next;
}

//------------------------------------------------------------------------------
// Solver
//------------------------------------------------------------------------------

namespace detail {

struct SmartEngine
{
  WorkerRole              role;
  std::unique_ptr<DpPass> pass;
};

}  // namespace detail

/// Runs the hybrid to completion (or timeout). `opts.threads` is the worker
/// budget; with fewer workers than engines, engines are run one after another
/// in priority order (DP passes, gradual processes by ascending omega, then
/// the subspace search).
inline SolverResult smart_solve(CharacteristicFunction const &v, TuningResult const &tuning,
                                SolveOptions const &opts = {})
{
  auto const start = StopControl::Clock::now();
  int const  n     = v.agents();
  if (tuning.n != n)
  {
    throw PreconditionError("tuning/problem size mismatch");
  }
  if (!pair_covers_all(tuning.cdp_pair))
  {
    throw PreconditionError("tuning pair does not cover every subspace");
  }

  SharedState state(v);
  StopControl stop(opts.deadline());

  std::vector<detail::SmartEngine> engines;
  engines.push_back({WorkerRole::cdp, std::make_unique<DpPass>(v, state.tables, tuning.cdp_pair.first, state.context())});
  engines.push_back({WorkerRole::cdp, std::make_unique<DpPass>(v, state.tables, tuning.cdp_pair.second, state.context())});
  for (auto const &s : tuning.grad_sets())
  {
    engines.push_back({WorkerRole::grad, std::make_unique<DpPass>(v, state.tables, s, state.context())});
  }

  std::mutex progress_mu;
  auto       report = [&] {
    if (!opts.on_progress)
    {
      return;
    }
    std::uint64_t splits = 0;
    for (auto const &e : engines)
    {
      splits += e.pass->splits();
    }
    std::lock_guard<std::mutex> lock(progress_mu);
    opts.on_progress({state.incumbent.value(), state.queue.size() - state.queue.terminal_count(), splits});
  };

  std::size_t const workers = static_cast<std::size_t>(std::max(1, opts.deterministic ? 1 : opts.threads));
  WorkerPool        pool(workers);

  if (workers == 1)
  {
    // Round-robin: one size per DP engine, then a few subspaces. The subspace
    // search gets one extra quantum for every DP engine that has finished.
    for (;;)
    {
      if (state.queue.complete() || stop.stop_requested())
      {
        break;
      }
      std::size_t finished = 0;
      for (auto &e : engines)
      {
        if (!e.pass->done())
        {
          pool.assign(0, e.role);
          e.pass->step(&stop);
          report();
        }
        finished += e.pass->done() ? 1 : 0;
        if (state.queue.complete() || stop.stop_requested())
        {
          break;
        }
      }
      bool searched = false;
      pool.assign(0, WorkerRole::dips);
      for (std::size_t q = 0; q < 1 + finished && !state.queue.complete() && !stop.stop_requested(); ++q)
      {
        if (!dips_step(state.queue, v, state.maxes, state.incumbent, &stop, state.dips))
        {
          break;
        }
        searched = true;
        report();
      }
      if (finished == engines.size() && !searched)
      {
        break;
      }
    }
  }
  else
  {
    std::atomic<std::size_t> next_engine{0};
    auto                     work = [&](std::size_t w) {
      for (;;)
      {
        std::size_t const e = next_engine.fetch_add(1, std::memory_order_acq_rel);
        if (e >= engines.size())
        {
          break;
        }
        pool.assign(w, engines[e].role);
        while (!engines[e].pass->done() && !stop.stop_requested())
        {
          if (!engines[e].pass->step(&stop))
          {
            break;
          }
          report();
        }
        if (state.queue.complete() || stop.stop_requested())
        {
          break;
        }
      }
      if (state.queue.complete())
      {
        // nothing left to prove: interrupt engines still mid-size
        stop.request_stop();
      }
      if (handoff_worker(pool, w, state.queue) == WorkerRole::dips)
      {
        while (!stop.stop_requested() && !state.queue.complete())
        {
          if (!dips_step(state.queue, v, state.maxes, state.incumbent, &stop, state.dips))
          {
            break;
          }
          report();
        }
        if (state.queue.complete())
        {
          stop.request_stop();
        }
      }
      pool.assign(w, WorkerRole::retired);
    };
    std::vector<std::jthread> threads;
    for (std::size_t w = 1; w < workers; ++w)
    {
      threads.emplace_back(work, w);
    }
    work(0);
  }

  SolverStats stats;
  for (auto const &e : engines)
  {
    stats.pass_splits.push_back(e.pass->splits());
    stats.splits_evaluated += e.pass->splits();
  }
  stats.bnb_nodes_expanded = state.dips.nodes_expanded.load();
  stats.bnb_leaves         = state.dips.leaves.load();
  return detail::incumbent_result(state.incumbent, state.queue, v, std::move(stats), start);
}

/// Hybrid with the memoized default tuning for v's size.
inline SolverResult smart_solve(CharacteristicFunction const &v, SolveOptions const &opts = {})
{
  return smart_solve(v, tuning_for(v.agents()), opts);
}

}  // namespace csg
