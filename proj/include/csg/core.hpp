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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace csg {

/// Hard limit on the number of agents; masks are 32-bit and tables dense.
inline constexpr int kMaxAgents = 30;

//------------------------------------------------------------------------------
// Errors
//------------------------------------------------------------------------------

/// Bad caller input (out-of-range n, size, part value, ...).
struct ArgumentError : std::invalid_argument
{
  using std::invalid_argument::invalid_argument;
};

/// An object violates its invariants (overlapping structure, corrupt file, ...).
struct ValidationError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

/// An operation was invoked on an object in the wrong state.
struct StateError : std::logic_error
{
  using std::logic_error::logic_error;
};

/// A solver precondition does not hold, so optimality could not be guaranteed.
struct PreconditionError : std::logic_error
{
  using std::logic_error::logic_error;
};

/// Internal tables are inconsistent. Should never escape a correct engine.
struct InternalError : std::logic_error
{
  using std::logic_error::logic_error;
};

//------------------------------------------------------------------------------
// Coalitions
//------------------------------------------------------------------------------

using Mask = std::uint32_t;

/// Agent a_{i+1} is bit i. The grand coalition of n agents is 2^n - 1.
struct Coalition
{
  Mask mask{0};

  constexpr Coalition() = default;
  constexpr explicit Coalition(Mask m)
    : mask(m)
  {}

  [[nodiscard]] constexpr int  size() const { return std::popcount(mask); }
  [[nodiscard]] constexpr bool empty() const { return mask == 0; }
  [[nodiscard]] constexpr bool contains(int agent) const { return (mask >> agent) & 1u; }

  friend constexpr bool operator==(Coalition, Coalition) = default;
  friend constexpr auto operator<=>(Coalition, Coalition) = default;
};

[[nodiscard]] constexpr Mask grand_mask(int n)
{
  return n >= 32 ? ~Mask{0} : ((Mask{1} << n) - 1u);
}

[[nodiscard]] constexpr Coalition grand_coalition(int n)
{
  return Coalition{grand_mask(n)};
}

/// Zero-based agent indices of a coalition, ascending.
inline std::vector<int> agents_of(Coalition c)
{
  std::vector<int> out;
  for (Mask m = c.mask; m != 0; m &= m - 1)
  {
    out.push_back(std::countr_zero(m));
  }
  return out;
}

inline void check_agent_count(int n)
{
  if (n < 1 || n > kMaxAgents)
  {
    throw ArgumentError("agent count must be in 1.." + std::to_string(kMaxAgents) +
                        ", got " + std::to_string(n));
  }
}

/// Visits every size-s coalition over n agents in strictly increasing mask
/// order (Gosper's hack). The visitor may return false to stop early.
template <typename Visitor>
void for_each_coalition_of_size(int n, int s, Visitor &&visit)
{
  check_agent_count(n);
  if (s < 1 || s > n)
  {
    throw ArgumentError("coalition size must be in 1..n, got " + std::to_string(s));
  }
  std::uint64_t const limit = std::uint64_t{1} << n;
  std::uint64_t       m     = (std::uint64_t{1} << s) - 1;
  while (m < limit)
  {
    if constexpr (std::is_same_v<decltype(visit(Coalition{})), bool>)
    {
      if (!visit(Coalition{static_cast<Mask>(m)}))
      {
        return;
      }
    }
    else
    {
      visit(Coalition{static_cast<Mask>(m)});
    }
    std::uint64_t const low    = m & (~m + 1);
    std::uint64_t const ripple = m + low;
    m = (((ripple ^ m) >> 2) / low) | ripple;
  }
}

inline std::vector<Coalition> coalitions_of_size(int n, int s)
{
  std::vector<Coalition> out;
  for_each_coalition_of_size(n, s, [&](Coalition c) { out.push_back(c); });
  return out;
}

/// Visits every unordered two-way split {c1, c2} of c exactly once. c1 always
/// holds the lowest member of c; c1 grows through the submasks of the rest in
/// ascending order.
template <typename Visitor>
void for_each_split(Coalition c, Visitor &&visit)
{
  if (c.size() < 2)
  {
    throw ArgumentError("a coalition needs at least two members to be split");
  }
  Mask const low  = c.mask & (~c.mask + 1u);
  Mask const rest = c.mask ^ low;
  Mask       sub  = 0;
  do
  {
    visit(Coalition{low | sub}, Coalition{rest ^ sub});
    sub = (sub - rest) & rest;
  } while (sub != rest);
}

struct Split
{
  Coalition first;
  Coalition second;

  friend bool operator==(Split const &, Split const &) = default;
};

inline std::vector<Split> proper_splits(Coalition c)
{
  std::vector<Split> out;
  for_each_split(c, [&](Coalition a, Coalition b) { out.push_back({a, b}); });
  return out;
}

//------------------------------------------------------------------------------
// Characteristic function
//------------------------------------------------------------------------------

/// Dense table of 2^n coalition values indexed by mask; index 0 is fixed at 0.
class CharacteristicFunction
{
public:
  CharacteristicFunction() = default;

  /// All-zero function over n agents.
  explicit CharacteristicFunction(int n)
    : n_(n)
  {
    check_agent_count(n);
    values_.assign(std::size_t{1} << n, 0.0);
  }

  CharacteristicFunction(int n, std::vector<double> values)
    : n_(n)
    , values_(std::move(values))
  {
    check_agent_count(n);
    validate();
  }

  [[nodiscard]] int                        agents() const { return n_; }
  [[nodiscard]] std::size_t                table_size() const { return values_.size(); }
  [[nodiscard]] std::vector<double> const &values() const { return values_; }

  [[nodiscard]] double operator()(Coalition c) const { return values_[c.mask]; }
  [[nodiscard]] double operator[](Mask m) const { return values_[m]; }

  void set(Coalition c, double value)
  {
    if (c.empty())
    {
      throw ArgumentError("the empty coalition has no value");
    }
    if (!std::isfinite(value))
    {
      throw ValidationError("coalition values must be finite");
    }
    values_.at(c.mask) = value;
  }

  void validate() const
  {
    if (values_.size() != (std::size_t{1} << n_))
    {
      throw ValidationError("value table must hold exactly 2^n entries");
    }
    if (values_[0] != 0.0)
    {
      throw ValidationError("value of the empty coalition must be 0");
    }
    for (double x : values_)
    {
      if (!std::isfinite(x))
      {
        throw ValidationError("coalition values must be finite");
      }
    }
  }

private:
  int                 n_{0};
  std::vector<double> values_;
};

//------------------------------------------------------------------------------
// Coalition structures
//------------------------------------------------------------------------------

struct CoalitionStructure
{
  std::vector<Coalition> coalitions;

  /// Sorted by mask; two structures over the same coalitions compare equal.
  [[nodiscard]] CoalitionStructure canonical() const
  {
    CoalitionStructure out{coalitions};
    std::sort(out.coalitions.begin(), out.coalitions.end());
    return out;
  }

  friend bool operator==(CoalitionStructure const &, CoalitionStructure const &) = default;
};

/// Throws ValidationError unless cs partitions the n agents.
inline void validate_structure(CoalitionStructure const &cs, int n)
{
  Mask seen = 0;
  for (Coalition c : cs.coalitions)
  {
    if (c.empty())
    {
      throw ValidationError("coalition structure contains an empty coalition");
    }
    if ((c.mask & ~grand_mask(n)) != 0)
    {
      throw ValidationError("coalition structure mentions an agent beyond n");
    }
    if ((seen & c.mask) != 0)
    {
      throw ValidationError("coalition structure has overlapping coalitions");
    }
    seen |= c.mask;
  }
  if (seen != grand_mask(n))
  {
    throw ValidationError("coalition structure does not cover every agent");
  }
}

/// Sum of v over the coalitions, in canonical (mask) order so that the
/// result does not depend on how the structure was assembled.
inline double structure_value(CoalitionStructure const &cs, CharacteristicFunction const &v)
{
  validate_structure(cs, v.agents());
  std::vector<Mask> masks;
  masks.reserve(cs.coalitions.size());
  for (Coalition c : cs.coalitions)
  {
    masks.push_back(c.mask);
  }
  std::sort(masks.begin(), masks.end());
  double total = 0.0;
  for (Mask m : masks)
  {
    total += v[m];
  }
  return total;
}

//------------------------------------------------------------------------------
// Per-size maxima
//------------------------------------------------------------------------------

/// max_by_size[s] is the largest raw value of any size-s coalition (s = 1..n).
/// Index 0 is unused.
struct SizeMaxTable
{
  std::vector<double> max_by_size;

  [[nodiscard]] double operator[](int size) const { return max_by_size[static_cast<std::size_t>(size)]; }
};

inline SizeMaxTable size_max_table(CharacteristicFunction const &v)
{
  int const n = v.agents();
  SizeMaxTable t;
  t.max_by_size.assign(static_cast<std::size_t>(n) + 1, -std::numeric_limits<double>::infinity());
  auto const &vals = v.values();
  for (std::size_t m = 1; m < vals.size(); ++m)
  {
    auto const s = static_cast<std::size_t>(std::popcount(static_cast<Mask>(m)));
    t.max_by_size[s] = std::max(t.max_by_size[s], vals[m]);
  }
  return t;
}

//------------------------------------------------------------------------------
// Results
//------------------------------------------------------------------------------

struct SolverStats
{
  std::uint64_t splits_evaluated{0};
  std::uint64_t subspaces_searched{0};
  std::uint64_t subspaces_pruned_ub{0};
  std::uint64_t subspaces_pruned_connectivity{0};
  std::uint64_t bnb_nodes_expanded{0};
  std::uint64_t bnb_leaves{0};
  std::uint64_t structures_enumerated{0};
  std::int64_t  elapsed_ns{0};
  /// Split evaluations per dynamic-programming pass, in engine order.
  std::vector<std::uint64_t> pass_splits;
};

struct SolverResult
{
  CoalitionStructure structure;
  double             value{-std::numeric_limits<double>::infinity()};
  /// False when the run stopped (timeout) before optimality was established.
  bool        optimal{true};
  SolverStats stats;
};

}  // namespace csg
