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

// Offline size-set tuning: the cost model, the complementary pair tuner that
// feeds the two-pass DP, and the per-coverage-fraction tuner that feeds the
// gradual DP processes.

#include "csg/core.hpp"
#include "csg/partition_graph.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>
#include <utility>
#include <vector>

namespace csg {

/// Largest n for which the exhaustive tuners are run.
inline constexpr int kExactTuningCap = 22;

//------------------------------------------------------------------------------
// Size sets
//------------------------------------------------------------------------------

/// Coalition sizes evaluated by one DP pass. Bit k of `bits` stands for size
/// k + 2; size n is always evaluated and never stored in `bits`.
struct SizeSet
{
  int           n{0};
  std::uint32_t bits{0};

  SizeSet() = default;
  SizeSet(int agents, std::uint32_t b)
    : n(agents)
    , bits(b)
  {
    check_agent_count(agents);
    if (agents >= 2 && (b >> std::max(agents - 2, 0)) != 0)
    {
      throw ArgumentError("size-set encoding has bits beyond size n-1");
    }
    if (agents < 2 && b != 0)
    {
      throw ArgumentError("size-set encoding has bits beyond size n-1");
    }
  }

  /// Accepts sizes in 2..n; n itself may be listed or omitted.
  static SizeSet from_sizes(int agents, std::vector<int> const &sizes)
  {
    check_agent_count(agents);
    std::uint32_t b = 0;
    for (int s : sizes)
    {
      if (s == agents)
      {
        continue;
      }
      if (s < 2 || s > agents - 1)
      {
        throw ArgumentError("size " + std::to_string(s) + " cannot be split for n=" +
                            std::to_string(agents));
      }
      b |= std::uint32_t{1} << (s - 2);
    }
    return SizeSet{agents, b};
  }

  /// Every size 2..n-1.
  static SizeSet all(int agents)
  {
    return SizeSet{agents, agents >= 3 ? (std::uint32_t{1} << (agents - 2)) - 1 : 0};
  }

  [[nodiscard]] bool contains(int s) const
  {
    if (s == n)
    {
      return true;
    }
    return s >= 2 && s < n && ((bits >> (s - 2)) & 1u);
  }

  /// Ascending sizes excluding n.
  [[nodiscard]] std::vector<int> sizes() const
  {
    std::vector<int> out;
    for (int s = 2; s < n; ++s)
    {
      if (contains(s))
      {
        out.push_back(s);
      }
    }
    return out;
  }

  /// Ascending evaluation order: the encoded sizes, then n.
  [[nodiscard]] std::vector<int> evaluation_order() const
  {
    auto out = sizes();
    if (n >= 2)
    {
      out.push_back(n);
    }
    return out;
  }

  /// Split labels usable in the partition graph once this set is evaluated.
  [[nodiscard]] SplitLabels labels() const
  {
    return (static_cast<SplitLabels>(bits) << 2) | (SplitLabels{1} << n);
  }

  [[nodiscard]] std::string to_string() const
  {
    std::string out = "{";
    auto        all = evaluation_order();
    for (std::size_t i = 0; i < all.size(); ++i)
    {
      out += (i ? "," : "") + std::to_string(all[i]);
    }
    return out + "}";
  }

  friend bool operator==(SizeSet const &, SizeSet const &) = default;
  friend auto operator<=>(SizeSet const &, SizeSet const &) = default;
};

inline std::ostream &operator<<(std::ostream &os, SizeSet const &s)
{
  return os << s.to_string();
}

/// Partitions of n reachable from [n] when sizes ∪ {n} may be split.
inline std::vector<IntegerPartition> reachable_subspaces(int n, SizeSet const &sizes)
{
  auto const &g = partition_graph(n);
  return g.members(g.reachable(sizes.labels()));
}

//------------------------------------------------------------------------------
// Cost model
//------------------------------------------------------------------------------

inline std::uint64_t binomial(int n, int k)
{
  if (k < 0 || k > n)
  {
    return 0;
  }
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i)
  {
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return r;
}

/// Number of two-way split evaluations needed to process every size-s coalition.
inline std::uint64_t split_eval_count(int n, int s)
{
  check_agent_count(n);
  if (s < 2 || s > n)
  {
    throw ArgumentError("split_eval_count: size must be in 2..n");
  }
  return binomial(n, s) * ((std::uint64_t{1} << (s - 1)) - 1);
}

struct CostModel
{
  int                 n{0};
  double              unit_split_cost{1.0};
  std::vector<double> per_size_cost;  // index = size; entries 0 and 1 unused

  static CostModel unit(int agents, double unit_cost = 1.0)
  {
    check_agent_count(agents);
    CostModel cm;
    cm.n               = agents;
    cm.unit_split_cost = unit_cost;
    cm.per_size_cost.assign(static_cast<std::size_t>(agents) + 1, 0.0);
    for (int s = 2; s <= agents; ++s)
    {
      cm.per_size_cost[static_cast<std::size_t>(s)] =
          static_cast<double>(split_eval_count(agents, s)) * unit_cost;
    }
    return cm;
  }

  [[nodiscard]] bool is_unit() const
  {
    auto ref = unit(n, unit_split_cost);
    return ref.per_size_cost == per_size_cost;
  }
};

/// Cost of one pass: the listed sizes plus n. Size 1 is never split.
inline double set_time(SizeSet const &sizes, CostModel const &cm)
{
  if (cm.n != sizes.n)
  {
    throw ArgumentError("cost model and size set disagree on n");
  }
  double t = 0.0;
  for (int s : sizes.evaluation_order())
  {
    t += cm.per_size_cost[static_cast<std::size_t>(s)];
  }
  return t;
}

//------------------------------------------------------------------------------
// Exhaustive candidate table shared by both tuners
//------------------------------------------------------------------------------

namespace detail {

struct Candidate
{
  std::uint32_t bits;
  double        cost;
  NodeSet       cover;
};

inline std::vector<Candidate> all_candidates(int n, CostModel const &cm)
{
  auto const   &g     = partition_graph(n);
  std::uint32_t count = std::uint32_t{1} << (n - 2);
  std::vector<Candidate> out;
  out.reserve(count);
  for (std::uint32_t b = 0; b < count; ++b)
  {
    SizeSet s{n, b};
    out.push_back({b, set_time(s, cm), g.reachable(s.labels())});
  }
  return out;
}

inline void check_tunable(int n)
{
  if (n < 4)
  {
    throw ArgumentError("size-set tuning needs n >= 4 (no sizes strictly between 1 and n to choose from)");
  }
  if (n > kExactTuningCap)
  {
    throw ArgumentError("exact size-set tuning is capped at n=" + std::to_string(kExactTuningCap));
  }
}

}  // namespace detail

//------------------------------------------------------------------------------
// Pair tuner
//------------------------------------------------------------------------------

/// Cheapest pair of size sets whose reachable subspaces jointly cover every
/// partition of n. Pairs are ranked by (max cost, min cost, lower encoding,
/// higher encoding). `first` is the costlier member.
inline std::pair<SizeSet, SizeSet> ssd_tune(int n, CostModel const &cm)
{
  detail::check_tunable(n);
  auto cands = detail::all_candidates(n, cm);

  // Only the cheapest (then lowest-encoded) set per distinct coverage matters.
  std::sort(cands.begin(), cands.end(), [](auto const &a, auto const &b) {
    return std::tie(a.cost, a.bits) < std::tie(b.cost, b.bits);
  });
  std::vector<detail::Candidate> uniq;
  {
    std::map<std::vector<std::uint64_t>, bool> seen;
    for (auto &c : cands)
    {
      if (seen.emplace(c.cover.words(), true).second)
      {
        uniq.push_back(std::move(c));
      }
    }
  }

  using Key = std::tuple<double, double, std::uint32_t, std::uint32_t>;
  std::optional<Key> best;
  std::uint32_t      best_hi = 0;
  std::uint32_t      best_lo = 0;

  for (std::size_t a = 0; a < uniq.size(); ++a)
  {
    auto const &hi = uniq[a];
    if (best && hi.cost > std::get<0>(*best))
    {
      break;
    }
    // Partner at position <= a keeps hi the costlier member.
    for (std::size_t b = 0; b <= a; ++b)
    {
      auto const &lo = uniq[b];
      if (!hi.cover.covers_all_with(lo.cover))
      {
        continue;
      }
      Key key{hi.cost, lo.cost, std::min(hi.bits, lo.bits), std::max(hi.bits, lo.bits)};
      if (!best || key < *best)
      {
        best    = key;
        best_hi = hi.bits;
        best_lo = lo.bits;
      }
      break;  // later partners only cost more
    }
  }
  // The full size set always covers everything, so a pair exists.
  return {SizeSet{n, best_hi}, SizeSet{n, best_lo}};
}

//------------------------------------------------------------------------------
// Coverage-fraction tuner
//------------------------------------------------------------------------------

/// Smallest node count that satisfies "covers at least omega of p(n)".
inline std::size_t required_coverage(std::size_t total, double omega)
{
  return static_cast<std::size_t>(std::ceil(omega * static_cast<double>(total) - 1e-9));
}

/// Cheapest size set reaching at least omega of all subspaces; ties go to the
/// lowest encoding.
inline SizeSet soft_tune(int n, double omega, CostModel const &cm)
{
  if (!(omega > 0.0 && omega <= 1.0))
  {
    throw ArgumentError("omega must lie in (0, 1]");
  }
  detail::check_tunable(n);
  auto const       &g    = partition_graph(n);
  std::size_t const need = required_coverage(g.size(), omega);

  std::optional<std::pair<double, std::uint32_t>> best;
  std::uint32_t const count = std::uint32_t{1} << (n - 2);
  for (std::uint32_t b = 0; b < count; ++b)
  {
    SizeSet     s{n, b};
    double const t = set_time(s, cm);
    if (best && t >= best->first)
    {
      continue;
    }
    if (g.reachable(s.labels()).count() >= need)
    {
      best = std::make_pair(t, b);
    }
  }
  return SizeSet{n, best->second};
}

//------------------------------------------------------------------------------
// Tuning results
//------------------------------------------------------------------------------

struct GradSetting
{
  double  omega;
  SizeSet sizes;

  friend bool operator==(GradSetting const &, GradSetting const &) = default;
};

struct TuningResult
{
  int                          n{0};
  CostModel                    cost_model;
  std::pair<SizeSet, SizeSet>  cdp_pair;
  std::vector<GradSetting>     grad;  // ascending omega

  /// Distinct GRAD size sets in ascending-omega order of first appearance.
  [[nodiscard]] std::vector<SizeSet> grad_sets() const
  {
    std::vector<SizeSet> out;
    for (auto const &g : grad)
    {
      if (std::find(out.begin(), out.end(), g.sizes) == out.end())
      {
        out.push_back(g.sizes);
      }
    }
    return out;
  }

  [[nodiscard]] double cost(SizeSet const &s) const { return set_time(s, cost_model); }

  friend bool operator==(TuningResult const &a, TuningResult const &b)
  {
    return a.n == b.n && a.cost_model.per_size_cost == b.cost_model.per_size_cost &&
           a.cost_model.unit_split_cost == b.cost_model.unit_split_cost && a.cdp_pair == b.cdp_pair &&
           a.grad == b.grad;
  }
};

inline std::vector<double> default_omegas()
{
  return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
}

inline bool pair_covers_all(std::pair<SizeSet, SizeSet> const &pair)
{
  auto const &g = partition_graph(pair.first.n);
  return g.reachable(pair.first.labels()).covers_all_with(g.reachable(pair.second.labels()));
}

inline TuningResult tune_all(int n, std::vector<double> omegas, CostModel const &cm)
{
  TuningResult tr;
  tr.n          = n;
  tr.cost_model = cm;
  tr.cdp_pair   = ssd_tune(n, cm);
  std::sort(omegas.begin(), omegas.end());
  omegas.erase(std::unique(omegas.begin(), omegas.end()), omegas.end());
  for (double w : omegas)
  {
    tr.grad.push_back({w, soft_tune(n, w, cm)});
  }
  return tr;
}

//------------------------------------------------------------------------------
// Tuning file (JSON text)
//------------------------------------------------------------------------------

inline nlohmann::ordered_json tuning_to_json(TuningResult const &tr)
{
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["n"]       = tr.n;
  nlohmann::ordered_json cm;
  cm["unit_split_cost"] = tr.cost_model.unit_split_cost;
  cm["per_size_cost"]   = tr.cost_model.per_size_cost;
  j["cost_model"]       = cm;
  j["cdp_pair"] = {tr.cdp_pair.first.evaluation_order(), tr.cdp_pair.second.evaluation_order()};
  j["cdp_cost"] = {tr.cost(tr.cdp_pair.first), tr.cost(tr.cdp_pair.second)};
  auto &grad = j["grad"] = nlohmann::ordered_json::array();
  for (auto const &g : tr.grad)
  {
    nlohmann::ordered_json e;
    e["omega"]    = g.omega;
    e["sizes"]    = g.sizes.evaluation_order();
    e["cost"]     = tr.cost(g.sizes);
    e["coverage"] = reachable_subspaces(tr.n, g.sizes).size();
    grad.push_back(e);
  }
  return j;
}

struct TuningFileError : ValidationError
{
  enum class Kind
  {
    missing,
    malformed,
    size_mismatch,
    invalid
  };
  Kind kind;
  TuningFileError(Kind k, std::string const &msg)
    : ValidationError(msg)
    , kind(k)
  {}
};

inline TuningResult tuning_from_json(nlohmann::json const &j)
{
  using K = TuningFileError::Kind;
  TuningResult tr;
  try
  {
    if (j.at("version").get<int>() != 1)
    {
      throw TuningFileError(K::malformed, "unsupported tuning file version");
    }
    tr.n                          = j.at("n").get<int>();
    check_agent_count(tr.n);
    tr.cost_model.n               = tr.n;
    tr.cost_model.unit_split_cost = j.at("cost_model").at("unit_split_cost").get<double>();
    tr.cost_model.per_size_cost   = j.at("cost_model").at("per_size_cost").get<std::vector<double>>();
    if (tr.cost_model.per_size_cost.size() != static_cast<std::size_t>(tr.n) + 1)
    {
      throw TuningFileError(K::malformed, "per_size_cost must have n+1 entries");
    }
    auto const &pair = j.at("cdp_pair");
    if (!pair.is_array() || pair.size() != 2)
    {
      throw TuningFileError(K::malformed, "cdp_pair must hold exactly two size lists");
    }
    tr.cdp_pair = {SizeSet::from_sizes(tr.n, pair[0].get<std::vector<int>>()),
                   SizeSet::from_sizes(tr.n, pair[1].get<std::vector<int>>())};
    for (auto const &g : j.at("grad"))
    {
      tr.grad.push_back({g.at("omega").get<double>(),
                         SizeSet::from_sizes(tr.n, g.at("sizes").get<std::vector<int>>())});
    }
  }
  catch (TuningFileError const &)
  {
    throw;
  }
  catch (std::exception const &e)
  {
    throw TuningFileError(K::malformed, std::string("malformed tuning file: ") + e.what());
  }
  if (!pair_covers_all(tr.cdp_pair))
  {
    throw TuningFileError(K::invalid, "tuning file cdp_pair does not cover every subspace");
  }
  for (auto const &g : tr.grad)
  {
    if (!(g.omega > 0.0 && g.omega <= 1.0))
    {
      throw TuningFileError(K::invalid, "tuning file omega outside (0, 1]");
    }
    auto const &graph = partition_graph(tr.n);
    if (graph.reachable(g.sizes.labels()).count() < required_coverage(graph.size(), g.omega))
    {
      throw TuningFileError(K::invalid, "tuning file GRAD set does not reach its omega coverage");
    }
  }
  return tr;
}

inline void store_tuning(TuningResult const &tr, std::filesystem::path const &path)
{
  std::ofstream os(path, std::ios::binary);
  if (!os)
  {
    throw TuningFileError(TuningFileError::Kind::missing, "cannot write tuning file " + path.string());
  }
  os << tuning_to_json(tr).dump(2) << '\n';
}

inline TuningResult load_tuning(std::filesystem::path const &path,
                                std::optional<int>           expected_n = std::nullopt)
{
  std::ifstream is(path, std::ios::binary);
  if (!is)
  {
    throw TuningFileError(TuningFileError::Kind::missing, "tuning file not found: " + path.string());
  }
  nlohmann::json j;
  try
  {
    j = nlohmann::json::parse(is);
  }
  catch (nlohmann::json::exception const &e)
  {
    throw TuningFileError(TuningFileError::Kind::malformed, std::string("malformed tuning file: ") + e.what());
  }
  auto tr = tuning_from_json(j);
  if (expected_n && *expected_n != tr.n)
  {
    throw TuningFileError(TuningFileError::Kind::size_mismatch,
                          "tuning/problem size mismatch: tuning is for n=" + std::to_string(tr.n) +
                              ", problem has n=" + std::to_string(*expected_n));
  }
  return tr;
}

}  // namespace csg
