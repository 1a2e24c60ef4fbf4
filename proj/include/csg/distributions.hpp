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

// Seeded benchmark instance generators. Every coalition draws from its own
// counter-based stream keyed on (seed, mask), so tables are reproducible
// bit for bit on any platform and can be filled in any order.
//
// The samplers are written out here rather than taken from <random> because
// the standard distributions are not specified bit-exactly across library
// implementations.

#include "csg/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace csg {

/// Identity of the random source, recorded next to generated instances.
inline constexpr char const *kGeneratorId = "splitmix64-ctr/1";

inline constexpr std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Stream `stream` of generator `seed`. Draw k is a pure function of
/// (seed, stream, k).
class CounterRng
{
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(seed ^ splitmix64(stream ^ 0x6A09E667F3BCC909ull)))
  {}

  std::uint64_t next() { return splitmix64(key_ + 0x9E3779B97F4A7C15ull * ++ctr_); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }

  double normal()
  {
    // Box-Muller, cosine branch only so each call costs exactly two draws
    double const u1 = uniform_pos();
    double const u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

  double gamma(double shape, double scale)
  {
    if (shape < 1.0)
    {
      double const g = gamma(shape + 1.0, 1.0);
      return scale * g * std::pow(uniform_pos(), 1.0 / shape);
    }
    // Marsaglia & Tsang
    double const d = shape - 1.0 / 3.0;
    double const c = 1.0 / std::sqrt(9.0 * d);
    for (;;)
    {
      double x = normal();
      double t = 1.0 + c * x;
      if (t <= 0.0)
      {
        continue;
      }
      t              = t * t * t;
      double const u = uniform_pos();
      if (std::log(u) < 0.5 * x * x + d - d * t + d * std::log(t))
      {
        return scale * d * t;
      }
    }
  }

  double beta(double a, double b)
  {
    double const x = gamma(a, 1.0);
    double const y = gamma(b, 1.0);
    return x / (x + y);
  }

  double weibull(double scale, double shape) { return scale * std::pow(-std::log(uniform_pos()), 1.0 / shape); }

private:
  std::uint64_t key_;
  std::uint64_t ctr_{0};
};

//------------------------------------------------------------------------------
// Specs
//------------------------------------------------------------------------------

struct DistributionSpec
{
  std::string                   name;
  std::map<std::string, double> params;  // overrides of the defaults
  std::uint64_t                 seed{0};

  /// "name:key=val,key=val" with only explicitly given keys.
  [[nodiscard]] std::string to_string() const
  {
    std::ostringstream os;
    os << name;
    char sep = ':';
    for (auto const &[k, v] : params)
    {
      os << sep << k << '=' << v;
      sep = ',';
    }
    return os.str();
  }
};

/// Default parameters per distribution name.
inline std::map<std::string, std::map<std::string, double>> const &distribution_defaults()
{
  static std::map<std::string, std::map<std::string, double>> const defaults = {
      {"uniform", {{"scale", 1.0}}},
      {"normal", {{"mu", 10.0}, {"var", 0.01}}},
      {"modified_uniform", {{"scale", 1.0}, {"p", 0.2}, {"bonus", 50.0}}},
      {"modified_normal", {{"mu", 10.0}, {"var", 0.01}, {"p", 0.2}, {"bonus", 50.0}}},
      {"exponential", {{"rate", 1.0}}},
      {"beta", {{"a", 0.5}, {"b", 0.5}}},
      {"gamma", {{"shape", 2.0}, {"scale", 2.0}}},
      {"weibull", {{"scale", 1.0}, {"shape", 2.0}}},
      {"zipf", {{"s", 2.0}, {"cutoff", 1000.0}}},
      {"sva_beta", {{"agent_max", 10.0}, {"a", 0.5}, {"b", 0.5}}},
  };
  return defaults;
}

inline std::vector<std::string> distribution_names()
{
  std::vector<std::string> out;
  for (auto const &[k, _] : distribution_defaults())
  {
    out.push_back(k);
  }
  return out;
}

/// Parses "name" or "name:key=val,key=val".
inline DistributionSpec parse_distribution_spec(std::string const &text, std::uint64_t seed = 0)
{
  DistributionSpec spec;
  spec.seed         = seed;
  auto const colon  = text.find(':');
  spec.name         = text.substr(0, colon);
  auto const &known = distribution_defaults();
  auto const  it    = known.find(spec.name);
  if (it == known.end())
  {
    throw ArgumentError("unknown distribution '" + spec.name + "'");
  }
  if (colon == std::string::npos)
  {
    return spec;
  }
  std::stringstream rest(text.substr(colon + 1));
  std::string       item;
  while (std::getline(rest, item, ','))
  {
    auto const eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
    {
      throw ArgumentError("distribution parameter '" + item + "' is not key=value");
    }
    std::string const key = item.substr(0, eq);
    if (!it->second.contains(key))
    {
      throw ArgumentError("distribution '" + spec.name + "' has no parameter '" + key + "'");
    }
    std::size_t used = 0;
    double      val  = 0.0;
    try
    {
      val = std::stod(item.substr(eq + 1), &used);
    }
    catch (std::exception const &)
    {
      used = 0;
    }
    if (used == 0 || used != item.size() - eq - 1)
    {
      throw ArgumentError("distribution parameter '" + key + "' has a non-numeric value");
    }
    spec.params[key] = val;
  }
  return spec;
}

struct GenerationReport
{
  /// Negative draws raised to zero.
  std::size_t clamped{0};
};

namespace detail {

inline std::map<std::string, double> resolved_params(DistributionSpec const &spec)
{
  auto const &known = distribution_defaults();
  auto const  it    = known.find(spec.name);
  if (it == known.end())
  {
    throw ArgumentError("unknown distribution '" + spec.name + "'");
  }
  auto p = it->second;
  for (auto const &[k, v] : spec.params)
  {
    if (!p.contains(k))
    {
      throw ArgumentError("distribution '" + spec.name + "' has no parameter '" + k + "'");
    }
    if (!std::isfinite(v))
    {
      throw ArgumentError("distribution parameter '" + k + "' is not finite");
    }
    p[k] = v;
  }
  auto positive = [&](char const *k) {
    if (p.contains(k) && !(p[k] > 0.0))
    {
      throw ArgumentError(std::string("distribution parameter '") + k + "' must be positive");
    }
  };
  for (auto const *k : {"scale", "var", "rate", "a", "b", "shape", "s", "agent_max", "cutoff"})
  {
    positive(k);
  }
  if (p.contains("p") && (p["p"] < 0.0 || p["p"] > 1.0))
  {
    throw ArgumentError("distribution parameter 'p' must lie in [0, 1]");
  }
  if (p.contains("bonus") && p["bonus"] < 0.0)
  {
    throw ArgumentError("distribution parameter 'bonus' must be non-negative");
  }
  return p;
}

/// Cumulative Zipf weights over 1..cutoff.
inline std::vector<double> zipf_cdf(double s, int cutoff)
{
  std::vector<double> cdf(static_cast<std::size_t>(cutoff));
  double              acc = 0.0;
  for (int k = 1; k <= cutoff; ++k)
  {
    acc += std::pow(static_cast<double>(k), -s);
    cdf[static_cast<std::size_t>(k - 1)] = acc;
  }
  for (auto &c : cdf)
  {
    c /= acc;
  }
  return cdf;
}

// Agent values for sva_beta live in a stream range no mask can reach.
inline constexpr std::uint64_t kAgentStreamBase = std::uint64_t{1} << 40;

}  // namespace detail

/// Fills every coalition value of an n-agent instance.
inline CharacteristicFunction generate(DistributionSpec const &spec, int n, GenerationReport *report = nullptr)
{
  check_agent_count(n);
  auto const   p    = detail::resolved_params(spec);
  auto const   name = spec.name;
  auto const   at   = [&](char const *k) { return p.at(k); };
  std::size_t  size = std::size_t{1} << n;
  std::vector<double> values(size, 0.0);

  std::vector<double> zipf;
  if (name == "zipf")
  {
    double const cut = at("cutoff");
    if (cut < 1.0 || cut > 1e7 || cut != std::floor(cut))
    {
      throw ArgumentError("zipf cutoff must be an integer in 1..1e7");
    }
    zipf = detail::zipf_cdf(at("s"), static_cast<int>(cut));
  }
  std::vector<double> agent_value;
  if (name == "sva_beta")
  {
    for (int i = 0; i < n; ++i)
    {
      CounterRng r(spec.seed, detail::kAgentStreamBase + static_cast<std::uint64_t>(i));
      agent_value.push_back(at("agent_max") * r.uniform());
    }
  }

  std::size_t clamped = 0;
  for (std::size_t m = 1; m < size; ++m)
  {
    CounterRng   r(spec.seed, m);
    double const k = std::popcount(static_cast<Mask>(m));
    double       x = 0.0;
    if (name == "uniform" || name == "modified_uniform")
    {
      x = at("scale") * k * r.uniform();
    }
    else if (name == "normal" || name == "modified_normal")
    {
      x = at("mu") * k + std::sqrt(at("var") * k) * r.normal();
    }
    else if (name == "exponential")
    {
      x = k * r.exponential(at("rate"));
    }
    else if (name == "beta")
    {
      x = k * r.beta(at("a"), at("b"));
    }
    else if (name == "gamma")
    {
      x = k * r.gamma(at("shape"), at("scale"));
    }
    else if (name == "weibull")
    {
      x = k * r.weibull(at("scale"), at("shape"));
    }
    else if (name == "zipf")
    {
      double const u   = r.uniform();
      auto const   pos = std::upper_bound(zipf.begin(), zipf.end(), u) - zipf.begin();
      x                = k * static_cast<double>(std::min<std::ptrdiff_t>(pos, std::ssize(zipf) - 1) + 1);
    }
    else if (name == "sva_beta")
    {
      double sum = 0.0;
      for (Mask b = static_cast<Mask>(m); b != 0; b &= b - 1)
      {
        sum += agent_value[static_cast<std::size_t>(std::countr_zero(b))];
      }
      double const a = at("a");
      double const b = at("b");
      // scaled so the multiplier has mean one
      x = sum * r.beta(a, b) * (a + b) / a;
    }
    if (name.starts_with("modified_") && r.uniform() < at("p"))
    {
      x += at("bonus") * r.uniform();
    }
    if (x < 0.0)
    {
      x = 0.0;
      ++clamped;
    }
    values[m] = x;
  }
  if (report)
  {
    report->clamped = clamped;
  }
  return CharacteristicFunction(n, std::move(values));
}

}  // namespace csg
