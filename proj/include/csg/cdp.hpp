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

// Dynamic programming over coalition sizes. A pass evaluates every coalition
// of each chosen size (ascending, then n) against all of its two-way splits,
// keeping the better of "whole" and "split". Two passes over a complementary
// pair of size sets search every subspace between them.

#include "csg/core.hpp"
#include "csg/offline.hpp"
#include "csg/partition_graph.hpp"
#include "csg/search_state.hpp"

#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <thread>

namespace csg {

//------------------------------------------------------------------------------
// Tables
//------------------------------------------------------------------------------

/// Value table V_t and partition table P_t. P_t stores the first part of the
/// best split (0 means "keep whole"). Values only increase, and a value is
/// always written together with the split that produced it, so the pair can
/// be shared by several passes.
class DpTables
{
public:
  DpTables() = default;

  explicit DpTables(CharacteristicFunction const &v)
    : n_(v.agents())
    , size_(v.table_size())
    , values_(new std::atomic<double>[size_])
    , first_(new std::atomic<Mask>[size_])
    , locks_(new std::mutex[kStripes])
  {
    for (std::size_t m = 0; m < size_; ++m)
    {
      values_[m].store(v[static_cast<Mask>(m)], std::memory_order_relaxed);
      first_[m].store(0, std::memory_order_relaxed);
    }
  }

  [[nodiscard]] bool initialized() const { return values_ != nullptr; }
  [[nodiscard]] int  agents() const { return n_; }

  [[nodiscard]] double value(Mask m) const { return values_[m].load(std::memory_order_relaxed); }
  [[nodiscard]] Mask   first_part(Mask m) const { return first_[m].load(std::memory_order_relaxed); }

  /// Consistent (value, first part) pair.
  [[nodiscard]] std::pair<double, Mask> entry(Mask m) const
  {
    std::lock_guard<std::mutex> lock(stripe(m));
    return {value(m), first_part(m)};
  }

  /// Replaces the entry if `value` is strictly greater than the stored one.
  bool try_improve(Mask c, double value, Mask first)
  {
    std::lock_guard<std::mutex> lock(stripe(c));
    if (!(value > values_[c].load(std::memory_order_relaxed)))
    {
      return false;
    }
    first_[c].store(first, std::memory_order_relaxed);
    values_[c].store(value, std::memory_order_relaxed);
    return true;
  }

private:
  static constexpr std::size_t kStripes = 1024;

  std::mutex &stripe(Mask m) const { return locks_[(m * 2654435761u) % kStripes]; }

  int                                     n_{0};
  std::size_t                             size_{0};
  std::unique_ptr<std::atomic<double>[]>  values_;
  std::unique_ptr<std::atomic<Mask>[]>    first_;
  std::unique_ptr<std::mutex[]>           locks_;
};

//------------------------------------------------------------------------------
// Partition extraction
//------------------------------------------------------------------------------

/// Expands `root` through the recorded splits until every member is kept
/// whole. `first_part(C)` returns the first part of C's split or 0.
template <typename FirstPart>
CoalitionStructure extract_partition_with(Coalition root, FirstPart &&first_part)
{
  CoalitionStructure     out;
  std::vector<Coalition> work{root};
  std::size_t            expansions = 0;
  while (!work.empty())
  {
    Coalition c = work.back();
    work.pop_back();
    Mask const f = first_part(c.mask);
    if (f == 0)
    {
      out.coalitions.push_back(c);
      continue;
    }
    if ((f & ~c.mask) != 0 || f == c.mask)
    {
      throw InternalError("partition table entry is not a proper split of its coalition");
    }
    // every expansion adds one coalition, so a valid table needs < |root| of them
    if (++expansions > static_cast<std::size_t>(root.size()))
    {
      throw InternalError("partition table contains a cycle");
    }
    work.push_back(Coalition{f});
    work.push_back(Coalition{c.mask ^ f});
  }
  std::sort(out.coalitions.begin(), out.coalitions.end());
  return out;
}

inline CoalitionStructure extract_partition(Coalition root, std::span<Mask const> first_parts)
{
  return extract_partition_with(root, [&](Mask m) { return first_parts[m]; });
}

inline CoalitionStructure extract_partition(Coalition root, DpTables const &tables)
{
  return extract_partition_with(root, [&](Mask m) { return tables.entry(m).second; });
}

//------------------------------------------------------------------------------
// One DP pass as a resumable engine
//------------------------------------------------------------------------------

/// Shared search context for passes running inside the hybrid or gradual
/// solvers. Absent for standalone passes.
struct PassContext
{
  SubspaceQueue              *queue{nullptr};
  Incumbent                  *incumbent{nullptr};
  std::atomic<SplitLabels>   *edges{nullptr};  // union of labels added by any pass
};

/// Evaluates one size per step. With a context attached, each completed size
/// also publishes the pass's best structure, connectivity-prunes the
/// subspaces it has fully searched, and bound-prunes the rest.
class DpPass
{
public:
  DpPass(CharacteristicFunction const &v, DpTables &tables, SizeSet sizes, PassContext ctx = {})
    : v_(&v)
    , tables_(&tables)
    , sizes_(sizes)
    , order_(sizes.evaluation_order())
    , ctx_(ctx)
  {
    if (!tables.initialized())
    {
      throw StateError("DP tables used before initialisation");
    }
    if (sizes.n != v.agents() || tables.agents() != v.agents())
    {
      throw ArgumentError("size set, tables and function disagree on n");
    }
  }

  [[nodiscard]] bool done() const { return done_; }
  [[nodiscard]] bool completed_all_sizes() const { return next_ == order_.size(); }
  [[nodiscard]] SizeSet const &sizes() const { return sizes_; }
  [[nodiscard]] std::uint64_t  splits() const { return splits_.load(std::memory_order_relaxed); }
  [[nodiscard]] SplitLabels    evaluated_labels() const { return labels_; }

  /// Processes the next size. Returns false if interrupted mid-size; the
  /// interrupted size is then not counted as evaluated.
  bool step(StopControl const *stop = nullptr)
  {
    if (done_)
    {
      return true;
    }
    if (order_.empty())
    {
      // n = 1: nothing to split
      finish_bookkeeping(0);
      done_ = true;
      return true;
    }
    int const s = order_[next_];
    if (!evaluate_size(s, stop))
    {
      return false;
    }
    ++next_;
    labels_ |= SplitLabels{1} << s;
    finish_bookkeeping(s);
    if (next_ == order_.size())
    {
      done_ = true;
    }
    return true;
  }

  /// Runs every remaining size; false if stopped.
  bool run(StopControl const *stop = nullptr)
  {
    while (!done_)
    {
      if (!step(stop))
      {
        return false;
      }
    }
    return true;
  }

  [[nodiscard]] double grand_value() const { return tables_->value(grand_mask(v_->agents())); }

  [[nodiscard]] CoalitionStructure best_structure() const
  {
    return extract_partition(grand_coalition(v_->agents()), *tables_);
  }

private:
  bool evaluate_size(int s, StopControl const *stop)
  {
    int const      n      = v_->agents();
    bool           halted = false;
    std::uint64_t  splits = 0;
    std::size_t    seen   = 0;
    DpTables      &t      = *tables_;
    for_each_coalition_of_size(n, s, [&](Coalition c) {
      if (stop && (++seen & 63u) == 0 && stop->stop_requested())
      {
        halted = true;
        return false;
      }
      double best       = t.value(c.mask);
      Mask   best_first = 0;
      Mask const low    = c.mask & (~c.mask + 1u);
      Mask const rest   = c.mask ^ low;
      Mask       sub    = 0;
      do
      {
        Mask const   a   = low | sub;
        double const sum = t.value(a) + t.value(rest ^ sub);
        if (sum > best)
        {
          best       = sum;
          best_first = a;
        }
        ++splits;
        sub = (sub - rest) & rest;
      } while (sub != rest);
      if (best_first != 0)
      {
        t.try_improve(c.mask, best, best_first);
      }
      return true;
    });
    if (!halted)
    {
      splits_.fetch_add(splits, std::memory_order_relaxed);
    }
    return !halted;
  }

  void finish_bookkeeping(int s)
  {
    if (!ctx_.queue)
    {
      return;
    }
    int const n     = v_->agents();
    Mask const full = grand_mask(n);
    publish(best_structure());
    if (s != 0 && s != n)
    {
      // Cheap intermediate sample: every just-evaluated coalition paired with
      // the best known partition of its complement.
      double best   = -std::numeric_limits<double>::infinity();
      Mask   best_c = 0;
      for_each_coalition_of_size(n, s, [&](Coalition c) {
        double const val = tables_->value(c.mask) + tables_->value(full ^ c.mask);
        if (val > best)
        {
          best   = val;
          best_c = c.mask;
        }
      });
      if (best_c != 0 && best > ctx_.incumbent->value())
      {
        auto left  = extract_partition(Coalition{best_c}, *tables_);
        auto right = extract_partition(Coalition{full ^ best_c}, *tables_);
        left.coalitions.insert(left.coalitions.end(), right.coalitions.begin(), right.coalitions.end());
        publish(left);
      }
    }
    if (ctx_.edges && s != 0)
    {
      ctx_.edges->fetch_or(SplitLabels{1} << s, std::memory_order_acq_rel);
    }
    ctx_.queue->prune_connected(ctx_.queue->graph().reachable(labels_));
    ctx_.queue->prune_by_bound(ctx_.incumbent->value());
    if (ctx_.queue->complete())
    {
      done_ = true;
    }
  }

  void publish(CoalitionStructure cs)
  {
    double const val = structure_value(cs, *v_);
    ctx_.incumbent->offer(val, cs.canonical());
  }

  CharacteristicFunction const *v_;
  DpTables                     *tables_;
  SizeSet                       sizes_;
  std::vector<int>              order_;
  PassContext                   ctx_;
  std::size_t                   next_{0};
  SplitLabels                   labels_{0};
  std::atomic<std::uint64_t>    splits_{0};
  bool                          done_{false};
};

//------------------------------------------------------------------------------
// Free-function API
//------------------------------------------------------------------------------

struct PassResult
{
  CoalitionStructure structure;
  double             value;  // V_t of the grand coalition
  std::uint64_t      splits;
};

/// Runs one full pass over `sizes` (ascending, then n) on existing tables.
inline PassResult evaluate_sizes(DpTables &tables, CharacteristicFunction const &v, SizeSet const &sizes)
{
  DpPass pass(v, tables, sizes);
  pass.run();
  return {pass.best_structure(), pass.grand_value(), pass.splits()};
}

namespace detail {

inline SolverResult finish_result(CoalitionStructure cs, CharacteristicFunction const &v, SolverStats stats,
                                  bool optimal, StopControl::Clock::time_point start)
{
  SolverResult r;
  r.structure = cs.canonical();
  r.value     = structure_value(r.structure, v);
  r.optimal   = optimal;
  r.stats     = std::move(stats);
  r.stats.elapsed_ns =
      std::chrono::duration_cast<std::chrono::nanoseconds>(StopControl::Clock::now() - start).count();
  return r;
}

}  // namespace detail

/// Two complementary passes on private tables, then the better of the two
/// grand-coalition values (the second pass wins ties).
inline SolverResult cdp_solve(CharacteristicFunction const &v, std::pair<SizeSet, SizeSet> const &pair,
                              SolveOptions const &opts = {})
{
  auto const start = StopControl::Clock::now();
  if (pair.first.n != v.agents() || pair.second.n != v.agents())
  {
    throw ArgumentError("size-set pair is for a different n");
  }
  if (!pair_covers_all(pair))
  {
    throw PreconditionError("size-set pair " + pair.first.to_string() + " / " + pair.second.to_string() +
                            " does not cover every subspace; optimality cannot be guaranteed");
  }
  StopControl stop(opts.deadline());
  DpTables    t1(v);
  DpTables    t2(v);
  DpPass      p1(v, t1, pair.first);
  DpPass      p2(v, t2, pair.second);
  bool        ok1 = false;
  bool        ok2 = false;
  if (opts.threads >= 2 && !opts.deterministic)
  {
    std::thread worker([&] { ok2 = p2.run(&stop); });
    ok1 = p1.run(&stop);
    worker.join();
  }
  else
  {
    ok1 = p1.run(&stop);
    ok2 = p2.run(&stop);
  }
  SolverStats stats;
  stats.pass_splits      = {p1.splits(), p2.splits()};
  stats.splits_evaluated = p1.splits() + p2.splits();
  double const v1        = p1.grand_value();
  double const v2        = p2.grand_value();
  auto         cs        = v1 > v2 ? p1.best_structure() : p2.best_structure();
  return detail::finish_result(std::move(cs), v, std::move(stats), ok1 && ok2, start);
}

}  // namespace csg
