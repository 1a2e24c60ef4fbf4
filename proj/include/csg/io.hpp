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

// Problem files and result records.
//
// Problem file layout: "CSGV", version byte 0x01, one byte n, then 2^n
// little-endian IEEE-754 doubles indexed by coalition mask.

#include "csg/core.hpp"

#include <json.hpp>

#include <array>
#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

namespace csg {

inline constexpr std::array<char, 4> kProblemMagic   = {'C', 'S', 'G', 'V'};
inline constexpr std::uint8_t        kProblemVersion = 0x01;

struct ProblemFileError : ValidationError
{
  using ValidationError::ValidationError;
};

namespace detail {

inline std::uint64_t to_le(std::uint64_t x)
{
  if constexpr (std::endian::native == std::endian::big)
  {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i)
    {
      r = (r << 8) | ((x >> (8 * i)) & 0xFFu);
    }
    return r;
  }
  return x;
}

}  // namespace detail

inline void write_problem(std::ostream &os, CharacteristicFunction const &v)
{
  v.validate();
  os.write(kProblemMagic.data(), kProblemMagic.size());
  char const header[2] = {static_cast<char>(kProblemVersion), static_cast<char>(v.agents())};
  os.write(header, 2);
  for (double x : v.values())
  {
    std::uint64_t bits = detail::to_le(std::bit_cast<std::uint64_t>(x));
    char          buf[8];
    std::memcpy(buf, &bits, 8);
    os.write(buf, 8);
  }
  if (!os)
  {
    throw ProblemFileError("failed writing problem file");
  }
}

inline CharacteristicFunction read_problem(std::istream &is)
{
  std::array<char, 4> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kProblemMagic)
  {
    throw ProblemFileError("unrecognized problem file");
  }
  char header[2];
  is.read(header, 2);
  if (!is || static_cast<std::uint8_t>(header[0]) != kProblemVersion)
  {
    throw ProblemFileError("unrecognized problem file (unsupported version)");
  }
  int const n = static_cast<std::uint8_t>(header[1]);
  if (n < 1 || n > kMaxAgents)
  {
    throw ProblemFileError("problem file agent count out of range");
  }
  std::vector<double> values(std::size_t{1} << n);
  for (auto &x : values)
  {
    char buf[8];
    is.read(buf, 8);
    if (!is)
    {
      throw ProblemFileError("problem file truncated");
    }
    std::uint64_t bits;
    std::memcpy(&bits, buf, 8);
    x = std::bit_cast<double>(detail::to_le(bits));
  }
  if (is.peek() != std::char_traits<char>::eof())
  {
    throw ProblemFileError("problem file has trailing bytes");
  }
  if (std::bit_cast<std::uint64_t>(values[0]) != 0)
  {
    throw ProblemFileError("problem file index 0 must encode 0.0");
  }
  try
  {
    return CharacteristicFunction(n, std::move(values));
  }
  catch (ValidationError const &e)
  {
    throw ProblemFileError(e.what());
  }
}

inline void save_problem(std::filesystem::path const &path, CharacteristicFunction const &v)
{
  std::ofstream os(path, std::ios::binary);
  if (!os)
  {
    throw ProblemFileError("cannot open " + path.string() + " for writing");
  }
  write_problem(os, v);
}

inline CharacteristicFunction load_problem(std::filesystem::path const &path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is)
  {
    throw ProblemFileError("cannot open " + path.string());
  }
  return read_problem(is);
}

/// Tiny text instances: "mask,value" per line (decimal, 0x or 0b masks); '#' comments and an optional
/// header line are ignored. n is the highest agent referenced unless given.
inline CharacteristicFunction read_problem_csv(std::istream &is, std::optional<int> agents = std::nullopt)
{
  std::vector<std::pair<Mask, double>> rows;
  Mask                                 all = 0;
  std::string                          line;
  int                                  lineno = 0;
  while (std::getline(is, line))
  {
    ++lineno;
    if (line.empty() || line[0] == '#' || line.starts_with("mask"))
    {
      continue;
    }
    auto const comma = line.find(',');
    if (comma == std::string::npos)
    {
      throw ProblemFileError("csv line " + std::to_string(lineno) + ": expected mask,value");
    }
    try
    {
      std::string const key = line.substr(0, comma);
      int const         base = key.starts_with("0x") ? 16 : key.starts_with("0b") ? 2 : 10;
      unsigned long long m   = std::stoull(base == 10 ? key : key.substr(2), nullptr, base);
      double const      x    = std::stod(line.substr(comma + 1));
      if (m == 0 || m > grand_mask(kMaxAgents))
      {
        throw ProblemFileError("csv line " + std::to_string(lineno) + ": mask out of range");
      }
      rows.emplace_back(static_cast<Mask>(m), x);
      all |= static_cast<Mask>(m);
    }
    catch (std::logic_error const &)
    {
      throw ProblemFileError("csv line " + std::to_string(lineno) + ": expected mask,value");
    }
  }
  int const n = agents.value_or(std::max(1, 32 - std::countl_zero(all)));
  CharacteristicFunction v(n);
  for (auto [m, x] : rows)
  {
    if ((m & ~grand_mask(n)) != 0)
    {
      throw ProblemFileError("csv mask exceeds the agent count");
    }
    v.set(Coalition{m}, x);
  }
  v.validate();
  return v;
}

//------------------------------------------------------------------------------
// Result records
//------------------------------------------------------------------------------

struct ResultRecord
{
  int           n{0};
  std::string   algorithm;
  std::string   distribution;  // empty for file input
  std::optional<std::uint64_t> seed;
  std::string   generator;     // random source identity, generated instances only
  SolverResult  result;
};

inline std::vector<std::vector<int>> structure_agents(CoalitionStructure const &cs)
{
  std::vector<std::vector<int>> out;
  for (Coalition c : cs.canonical().coalitions)
  {
    std::vector<int> agents;
    for (int a : agents_of(c))
    {
      agents.push_back(a + 1);
    }
    out.push_back(std::move(agents));
  }
  return out;
}

inline nlohmann::ordered_json stats_to_json(SolverStats const &s, bool with_timing = true)
{
  nlohmann::ordered_json j;
  j["splits_evaluated"]              = s.splits_evaluated;
  j["pass_splits"]                   = s.pass_splits;
  j["subspaces_searched"]            = s.subspaces_searched;
  j["subspaces_pruned_ub"]           = s.subspaces_pruned_ub;
  j["subspaces_pruned_connectivity"] = s.subspaces_pruned_connectivity;
  j["bnb_nodes_expanded"]            = s.bnb_nodes_expanded;
  j["bnb_leaves"]                    = s.bnb_leaves;
  j["structures_enumerated"]         = s.structures_enumerated;
  if (with_timing)
  {
    j["elapsed_ns"] = s.elapsed_ns;
  }
  return j;
}

inline nlohmann::ordered_json record_to_json(ResultRecord const &r)
{
  nlohmann::ordered_json j;
  j["n"]            = r.n;
  j["algorithm"]    = r.algorithm;
  j["distribution"] = r.distribution;
  j["seed"]         = r.seed ? nlohmann::ordered_json(*r.seed) : nlohmann::ordered_json(nullptr);
  if (!r.generator.empty())
  {
    j["generator"] = r.generator;
  }
  j["value"]      = r.result.value;
  j["optimal"]    = r.result.optimal;
  j["structure"]  = structure_agents(r.result.structure);
  j["elapsed_ns"] = r.result.stats.elapsed_ns;
  j["stats"]      = stats_to_json(r.result.stats, false);
  return j;
}

/// Shortest text that round-trips the double.
inline std::string format_double(double x)
{
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
  return os.str();
}

/// "{1 2}{3}" style, agents 1-based.
inline std::string structure_to_text(CoalitionStructure const &cs)
{
  std::string out;
  for (auto const &c : structure_agents(cs))
  {
    out += '{';
    for (std::size_t i = 0; i < c.size(); ++i)
    {
      out += (i ? " " : "") + std::to_string(c[i]);
    }
    out += '}';
  }
  return out;
}

inline std::string const &csv_header()
{
  static std::string const h =
      "n,algorithm,distribution,seed,status,value,optimal,structure,elapsed_ns,splits_evaluated,pass_splits,"
      "subspaces_searched,subspaces_pruned_ub,subspaces_pruned_connectivity,bnb_nodes_expanded,bnb_leaves,"
      "structures_enumerated";
  return h;
}

inline std::string csv_field(std::string const &x)
{
  if (x.find_first_of(",\"\n") == std::string::npos)
  {
    return x;
  }
  std::string out = "\"";
  for (char c : x)
  {
    out += c == '"' ? std::string("\"\"") : std::string(1, c);
  }
  return out + "\"";
}

/// One CSV row matching csv_header(). `status` is "ok" or an error summary.
inline std::string record_to_csv(ResultRecord const &r, std::string const &status = "ok")
{
  auto const        &s = r.result.stats;
  std::ostringstream os;
  std::string        passes;
  for (std::size_t i = 0; i < s.pass_splits.size(); ++i)
  {
    passes += (i ? ";" : "") + std::to_string(s.pass_splits[i]);
  }
  bool const ok = status == "ok";
  os << r.n << ',' << r.algorithm << ',' << csv_field(r.distribution) << ',' << (r.seed ? std::to_string(*r.seed) : "")
     << ',' << csv_field(status) << ',' << (ok ? format_double(r.result.value) : "") << ','
     << (ok ? (r.result.optimal ? "true" : "false") : "") << ',' << (ok ? structure_to_text(r.result.structure) : "")
     << ',' << s.elapsed_ns << ',' << s.splits_evaluated << ',' << passes << ',' << s.subspaces_searched << ','
     << s.subspaces_pruned_ub << ',' << s.subspaces_pruned_connectivity << ',' << s.bnb_nodes_expanded << ','
     << s.bnb_leaves << ',' << s.structures_enumerated;
  return os.str();
}

}  // namespace csg
