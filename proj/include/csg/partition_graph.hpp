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

#include "csg/core.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace csg {

//------------------------------------------------------------------------------
// Integer partitions
//------------------------------------------------------------------------------

/// Parts kept ascending, so equal partitions compare equal.
struct IntegerPartition
{
  std::vector<int> parts;

  IntegerPartition() = default;
  IntegerPartition(std::initializer_list<int> p)
    : parts(p)
  {
    std::sort(parts.begin(), parts.end());
  }
  explicit IntegerPartition(std::vector<int> p)
    : parts(std::move(p))
  {
    std::sort(parts.begin(), parts.end());
  }

  [[nodiscard]] int level() const { return static_cast<int>(parts.size()); }

  [[nodiscard]] int total() const
  {
    int s = 0;
    for (int x : parts)
    {
      s += x;
    }
    return s;
  }

  [[nodiscard]] bool contains(int x) const
  {
    return std::binary_search(parts.begin(), parts.end(), x);
  }

  [[nodiscard]] std::string to_string() const
  {
    std::string out = "[";
    for (std::size_t i = 0; i < parts.size(); ++i)
    {
      out += (i ? "," : "") + std::to_string(parts[i]);
    }
    return out + "]";
  }

  friend bool operator==(IntegerPartition const &, IntegerPartition const &) = default;
  friend auto operator<=>(IntegerPartition const &, IntegerPartition const &) = default;
};

inline std::ostream &operator<<(std::ostream &os, IntegerPartition const &p)
{
  return os << p.to_string();
}

namespace detail {

inline void partitions_rec(int remaining, int min_part, std::vector<int> &cur,
                           std::vector<IntegerPartition> &out)
{
  if (remaining == 0)
  {
    out.emplace_back(cur);
    return;
  }
  for (int x = min_part; x <= remaining; ++x)
  {
    // the next part must still leave room for parts >= x, or finish exactly
    if (remaining - x != 0 && remaining - x < x)
    {
      continue;
    }
    cur.push_back(x);
    partitions_rec(remaining - x, x, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

/// All partitions of n, grouped by level (number of parts) and lexicographic
/// within a level. Level 1 is the bottom node [n].
inline std::vector<IntegerPartition> integer_partitions(int n)
{
  check_agent_count(n);
  std::vector<IntegerPartition> out;
  std::vector<int>              cur;
  detail::partitions_rec(n, 1, cur, out);
  std::stable_sort(out.begin(), out.end(), [](auto const &a, auto const &b) {
    if (a.level() != b.level())
    {
      return a.level() < b.level();
    }
    return a.parts < b.parts;
  });
  return out;
}

/// Every partition reached by replacing one occurrence of x with (a, x - a).
inline std::vector<IntegerPartition> split_children(IntegerPartition const &p, int x)
{
  if (x < 2 || !p.contains(x))
  {
    throw ArgumentError("split_children: part " + std::to_string(x) + " cannot be split in " +
                        p.to_string());
  }
  std::vector<IntegerPartition> out;
  std::vector<int>              base = p.parts;
  base.erase(std::find(base.begin(), base.end(), x));
  for (int a = 1; a <= x / 2; ++a)
  {
    std::vector<int> q = base;
    q.push_back(a);
    q.push_back(x - a);
    out.emplace_back(std::move(q));
  }
  return out;
}

/// p(n) by Euler's pentagonal-number recurrence. p(120) < 2^31, so 64-bit
/// arithmetic is exact across the supported range.
inline std::uint64_t partition_count(int n)
{
  if (n < 0 || n > 120)
  {
    throw ArgumentError("partition_count supports 0 <= n <= 120");
  }
  std::vector<std::int64_t> p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = 1;
  for (int m = 1; m <= n; ++m)
  {
    std::int64_t acc = 0;
    for (int k = 1;; ++k)
    {
      int const g1 = k * (3 * k - 1) / 2;
      if (g1 > m)
      {
        break;
      }
      std::int64_t const sign = (k % 2 == 1) ? 1 : -1;
      acc += sign * p[static_cast<std::size_t>(m - g1)];
      int const g2 = k * (3 * k + 1) / 2;
      if (g2 <= m)
      {
        acc += sign * p[static_cast<std::size_t>(m - g2)];
      }
    }
    p[static_cast<std::size_t>(m)] = acc;
  }
  return static_cast<std::uint64_t>(p[static_cast<std::size_t>(n)]);
}

//------------------------------------------------------------------------------
// Node sets
//------------------------------------------------------------------------------

/// Fixed-width bitset over the nodes of one partition graph.
class NodeSet
{
public:
  NodeSet() = default;
  explicit NodeSet(std::size_t bits)
    : bits_(bits)
    , words_((bits + 63) / 64, 0)
  {}

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  [[nodiscard]] bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }

  [[nodiscard]] std::size_t count() const
  {
    std::size_t c = 0;
    for (auto w : words_)
    {
      c += static_cast<std::size_t>(std::popcount(w));
    }
    return c;
  }

  [[nodiscard]] std::size_t size() const { return bits_; }

  /// True when every member of this set is also in other.
  [[nodiscard]] bool subset_of(NodeSet const &other) const
  {
    for (std::size_t i = 0; i < words_.size(); ++i)
    {
      if ((words_[i] & ~other.words_[i]) != 0)
      {
        return false;
      }
    }
    return true;
  }

  /// True when this set together with other covers all size() nodes.
  [[nodiscard]] bool covers_all_with(NodeSet const &other) const
  {
    for (std::size_t i = 0; i < words_.size(); ++i)
    {
      std::uint64_t const want = full_word(i);
      if (((words_[i] | other.words_[i]) & want) != want)
      {
        return false;
      }
    }
    return true;
  }

  [[nodiscard]] bool full() const { return covers_all_with(*this); }

  [[nodiscard]] NodeSet complement() const
  {
    NodeSet out(bits_);
    for (std::size_t i = 0; i < words_.size(); ++i)
    {
      out.words_[i] = ~words_[i] & full_word(i);
    }
    return out;
  }

  NodeSet &operator|=(NodeSet const &o)
  {
    for (std::size_t i = 0; i < words_.size(); ++i)
    {
      words_[i] |= o.words_[i];
    }
    return *this;
  }

  friend bool operator==(NodeSet const &, NodeSet const &) = default;

  [[nodiscard]] std::vector<std::uint64_t> const &words() const { return words_; }

private:
  [[nodiscard]] std::uint64_t full_word(std::size_t i) const
  {
    std::size_t const rem = bits_ - i * 64;
    return rem >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << rem) - 1);
  }

  std::size_t                bits_{0};
  std::vector<std::uint64_t> words_;
};

//------------------------------------------------------------------------------
// Partition graph
//------------------------------------------------------------------------------

/// Bit s set means "parts of value s may be split". Sizes go up to 30.
using SplitLabels = std::uint32_t;

/// Integer partition graph of n. Nodes are in integer_partitions(n) order,
/// so node 0 is always the bottom node [n].
class PartitionGraph
{
public:
  struct Edge
  {
    int label;  // the part value being split
    int child;  // node index of the resulting partition
  };

  explicit PartitionGraph(int n)
    : n_(n)
    , nodes_(integer_partitions(n))
  {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
    {
      index_.emplace(nodes_[i], static_cast<int>(i));
    }
    edges_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i)
    {
      auto const &parts = nodes_[i].parts;
      for (std::size_t k = 0; k < parts.size(); ++k)
      {
        if (parts[k] < 2 || (k > 0 && parts[k] == parts[k - 1]))
        {
          continue;
        }
        for (auto const &child : split_children(nodes_[i], parts[k]))
        {
          edges_[i].push_back({parts[k], index_.at(child)});
        }
      }
    }
  }

  [[nodiscard]] int                                   agents() const { return n_; }
  [[nodiscard]] std::size_t                           size() const { return nodes_.size(); }
  [[nodiscard]] std::vector<IntegerPartition> const  &nodes() const { return nodes_; }
  [[nodiscard]] IntegerPartition const               &node(std::size_t i) const { return nodes_[i]; }
  [[nodiscard]] std::vector<Edge> const              &edges(std::size_t i) const { return edges_[i]; }
  [[nodiscard]] static constexpr std::size_t          bottom() { return 0; }

  [[nodiscard]] int index_of(IntegerPartition const &p) const
  {
    auto it = index_.find(p);
    if (it == index_.end())
    {
      throw ArgumentError(p.to_string() + " is not a partition of " + std::to_string(n_));
    }
    return it->second;
  }

  /// Nodes connected to the bottom node using only edges whose label is in
  /// `labels`. The bottom node itself is always included.
  [[nodiscard]] NodeSet reachable(SplitLabels labels) const
  {
    NodeSet          seen(nodes_.size());
    std::vector<int> stack{0};
    seen.set(0);
    while (!stack.empty())
    {
      int const u = stack.back();
      stack.pop_back();
      for (auto const &e : edges_[static_cast<std::size_t>(u)])
      {
        if (((labels >> e.label) & 1u) && !seen.test(static_cast<std::size_t>(e.child)))
        {
          seen.set(static_cast<std::size_t>(e.child));
          stack.push_back(e.child);
        }
      }
    }
    return seen;
  }

  [[nodiscard]] std::vector<IntegerPartition> members(NodeSet const &set) const
  {
    std::vector<IntegerPartition> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
    {
      if (set.test(i))
      {
        out.push_back(nodes_[i]);
      }
    }
    return out;
  }

  /// DOT rendering; every edge is labelled with the part value it splits.
  void write_dot(std::ostream &os) const
  {
    os << "digraph ipg_" << n_ << " {\n  rankdir=BT;\n";
    for (std::size_t i = 0; i < nodes_.size(); ++i)
    {
      os << "  n" << i << " [label=\"" << nodes_[i].to_string() << "\"];\n";
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i)
    {
      for (auto const &e : edges_[i])
      {
        os << "  n" << i << " -> n" << e.child << " [label=\"" << e.label << "\"];\n";
      }
    }
    os << "}\n";
  }

private:
  int                                 n_;
  std::vector<IntegerPartition>       nodes_;
  std::map<IntegerPartition, int>     index_;
  std::vector<std::vector<Edge>>      edges_;
};

/// Process-wide cache; graphs are immutable once built.
inline PartitionGraph const &partition_graph(int n)
{
  check_agent_count(n);
  static std::mutex                                            mu;
  static std::map<int, std::unique_ptr<PartitionGraph const>> cache;
  std::lock_guard<std::mutex>                                  lock(mu);
  auto &slot = cache[n];
  if (!slot)
  {
    slot = std::make_unique<PartitionGraph const>(n);
  }
  return *slot;
}

//------------------------------------------------------------------------------
// Upper bounds
//------------------------------------------------------------------------------

/// Sum of Max_i over the parts, with multiplicity.
inline double subspace_upper_bound(IntegerPartition const &p, SizeMaxTable const &maxes)
{
  double ub = 0.0;
  for (int x : p.parts)
  {
    ub += maxes[x];
  }
  return ub;
}

}  // namespace csg
