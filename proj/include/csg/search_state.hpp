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

// State shared between concurrently running engines: the incumbent cell, the
// subspace registry/queue, and cooperative cancellation.

#include "csg/core.hpp"
#include "csg/partition_graph.hpp"

#include <atomic>
#include <chrono>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <vector>

namespace csg {

//------------------------------------------------------------------------------
// Cancellation
//------------------------------------------------------------------------------

class StopControl
{
public:
  using Clock = std::chrono::steady_clock;

  StopControl() = default;
  explicit StopControl(std::optional<Clock::time_point> deadline)
    : deadline_(deadline)
  {}

  void request_stop() { flag_.store(true, std::memory_order_relaxed); }

  [[nodiscard]] bool stop_requested() const
  {
    if (flag_.load(std::memory_order_relaxed))
    {
      return true;
    }
    if (deadline_ && Clock::now() >= *deadline_)
    {
      timed_out_.store(true, std::memory_order_relaxed);
      flag_.store(true, std::memory_order_relaxed);
      return true;
    }
    return false;
  }

  [[nodiscard]] bool timed_out() const { return timed_out_.load(std::memory_order_relaxed); }

private:
  std::optional<Clock::time_point> deadline_;
  mutable std::atomic<bool>        flag_{false};
  mutable std::atomic<bool>        timed_out_{false};
};

//------------------------------------------------------------------------------
// Incumbent
//------------------------------------------------------------------------------

/// Best structure found so far. The value only ever increases; an offer
/// replaces the incumbent only when strictly greater, so ties keep the first
/// writer.
class Incumbent
{
public:
  Incumbent() = default;

  [[nodiscard]] double value() const { return value_.load(std::memory_order_acquire); }

  bool offer(double value, CoalitionStructure const &cs)
  {
    if (!(value > this->value()))
    {
      return false;
    }
    std::lock_guard<std::mutex> lock(mu_);
    if (!(value > value_.load(std::memory_order_relaxed)))
    {
      return false;
    }
    structure_ = cs;
    value_.store(value, std::memory_order_release);
    return true;
  }

  /// Same as offer(), but only builds the structure when it would be kept.
  template <typename Build>
  bool offer_lazy(double value, Build &&build)
  {
    if (!(value > this->value()))
    {
      return false;
    }
    return offer(value, build());
  }

  [[nodiscard]] std::pair<double, CoalitionStructure> snapshot() const
  {
    std::lock_guard<std::mutex> lock(mu_);
    return {value_.load(std::memory_order_relaxed), structure_};
  }

  [[nodiscard]] bool has_structure() const
  {
    return value() > -std::numeric_limits<double>::infinity();
  }

private:
  mutable std::mutex  mu_;
  std::atomic<double> value_{-std::numeric_limits<double>::infinity()};
  CoalitionStructure  structure_;
};

//------------------------------------------------------------------------------
// Subspace registry
//------------------------------------------------------------------------------

enum class SubspaceState : std::uint8_t
{
  unsearched,
  claimed,
  searched,
  pruned_ub,
  pruned_connectivity,
};

inline bool is_terminal(SubspaceState s)
{
  return s == SubspaceState::searched || s == SubspaceState::pruned_ub ||
         s == SubspaceState::pruned_connectivity;
}

/// One entry per integer partition of n, with its upper bound and lifecycle
/// state. States only move forward: unsearched -> claimed -> searched, or
/// unsearched/claimed -> pruned. Entries are handed out to searchers in
/// descending upper-bound order (ties by partition order).
class SubspaceQueue
{
public:
  SubspaceQueue(PartitionGraph const &graph, SizeMaxTable const &maxes)
    : graph_(&graph)
    , ub_(graph.size())
    , state_(graph.size())
    , order_(graph.size())
  {
    for (std::size_t i = 0; i < graph.size(); ++i)
    {
      ub_[i] = subspace_upper_bound(graph.node(i), maxes);
      state_[i].store(SubspaceState::unsearched, std::memory_order_relaxed);
    }
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      if (ub_[a] != ub_[b])
      {
        return ub_[a] > ub_[b];
      }
      return graph.node(a).parts < graph.node(b).parts;
    });
  }

  SubspaceQueue(SubspaceQueue const &)            = delete;
  SubspaceQueue &operator=(SubspaceQueue const &) = delete;

  [[nodiscard]] PartitionGraph const &graph() const { return *graph_; }
  [[nodiscard]] std::size_t           size() const { return ub_.size(); }
  [[nodiscard]] double                upper_bound(std::size_t i) const { return ub_[i]; }
  [[nodiscard]] std::vector<std::size_t> const &order() const { return order_; }

  [[nodiscard]] SubspaceState state(std::size_t i) const
  {
    return state_[i].load(std::memory_order_acquire);
  }

  /// unsearched -> claimed.
  bool try_claim(std::size_t i)
  {
    auto expected = SubspaceState::unsearched;
    return state_[i].compare_exchange_strong(expected, SubspaceState::claimed, std::memory_order_acq_rel);
  }

  /// claimed -> searched. Fails if the subspace was pruned in the meantime.
  bool mark_searched(std::size_t i)
  {
    auto expected = SubspaceState::claimed;
    if (state_[i].compare_exchange_strong(expected, SubspaceState::searched, std::memory_order_acq_rel))
    {
      terminal_.fetch_add(1, std::memory_order_acq_rel);
      return true;
    }
    return false;
  }

  /// unsearched/claimed -> pruned_*. The first terminal state wins.
  bool prune(std::size_t i, SubspaceState rule)
  {
    auto cur = state_[i].load(std::memory_order_acquire);
    while (!is_terminal(cur))
    {
      if (state_[i].compare_exchange_weak(cur, rule, std::memory_order_acq_rel))
      {
        terminal_.fetch_add(1, std::memory_order_acq_rel);
        return true;
      }
    }
    return false;
  }

  /// Marks every member of `nodes` as pruned by connectivity; returns how many
  /// changed state.
  std::size_t prune_connected(NodeSet const &nodes)
  {
    std::size_t changed = 0;
    for (std::size_t i = 0; i < size(); ++i)
    {
      if (nodes.test(i) && prune(i, SubspaceState::pruned_connectivity))
      {
        ++changed;
      }
    }
    return changed;
  }

  /// Prunes every non-terminal subspace whose bound does not beat `incumbent`.
  std::size_t prune_by_bound(double incumbent)
  {
    std::size_t changed = 0;
    for (std::size_t i = 0; i < size(); ++i)
    {
      if (ub_[i] <= incumbent && prune(i, SubspaceState::pruned_ub))
      {
        ++changed;
      }
    }
    return changed;
  }

  /// Advances the shared cursor to the next subspace worth searching and
  /// claims it. Subspaces whose bound does not beat the incumbent are pruned
  /// on the way. Returns nullopt once the cursor has passed every entry.
  std::optional<std::size_t> claim_next(double incumbent)
  {
    for (;;)
    {
      std::size_t const pos = cursor_.fetch_add(1, std::memory_order_acq_rel);
      if (pos >= order_.size())
      {
        return std::nullopt;
      }
      std::size_t const i = order_[pos];
      if (state(i) != SubspaceState::unsearched)
      {
        continue;
      }
      if (ub_[i] <= incumbent)
      {
        prune(i, SubspaceState::pruned_ub);
        continue;
      }
      if (try_claim(i))
      {
        return i;
      }
    }
  }

  [[nodiscard]] bool exhausted() const
  {
    return cursor_.load(std::memory_order_acquire) >= order_.size();
  }

  [[nodiscard]] std::size_t terminal_count() const { return terminal_.load(std::memory_order_acquire); }
  [[nodiscard]] bool        complete() const { return terminal_count() == size(); }

  [[nodiscard]] std::size_t count(SubspaceState s) const
  {
    std::size_t c = 0;
    for (auto const &st : state_)
    {
      c += st.load(std::memory_order_acquire) == s ? 1 : 0;
    }
    return c;
  }

  void fill_stats(SolverStats &stats) const
  {
    stats.subspaces_searched            = count(SubspaceState::searched);
    stats.subspaces_pruned_ub           = count(SubspaceState::pruned_ub);
    stats.subspaces_pruned_connectivity = count(SubspaceState::pruned_connectivity);
  }

private:
  PartitionGraph const                      *graph_;
  std::vector<double>                        ub_;
  std::vector<std::atomic<SubspaceState>>    state_;
  std::vector<std::size_t>                   order_;
  std::atomic<std::size_t>                   cursor_{0};
  std::atomic<std::size_t>                   terminal_{0};
};

//------------------------------------------------------------------------------
// Options and progress
//------------------------------------------------------------------------------

struct ProgressSnapshot
{
  double        incumbent;
  std::size_t   subspaces_remaining;
  std::uint64_t splits_done;
};

struct SolveOptions
{
  /// Worker threads. 1 runs everything on the calling thread.
  int threads{1};
  /// Single worker stepping engines round-robin in fixed quanta.
  bool deterministic{false};
  std::optional<double> timeout_seconds;
  /// Called after every engine quantum (DP size or searched subspace).
  std::function<void(ProgressSnapshot const &)> on_progress;

  [[nodiscard]] std::optional<StopControl::Clock::time_point> deadline() const
  {
    if (!timeout_seconds)
    {
      return std::nullopt;
    }
    return StopControl::Clock::now() +
           std::chrono::duration_cast<StopControl::Clock::duration>(std::chrono::duration<double>(*timeout_seconds));
  }
};

}  // namespace csg
