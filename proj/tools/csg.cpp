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

// csg: solve, tune and benchmark coalition structure generation instances.
//
// Exit status: 0 optimal / success, 2 usage or input error, 3 stopped by the
// timeout before optimality was proven, 1 anything else.

#include "csg/csg.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

constexpr int kExitOk      = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage   = 2;
constexpr int kExitTimeout = 3;

struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

std::vector<std::string> const kAlgorithms = {"smart", "cdp", "grad", "dips", "idp", "dp", "brute"};

/// Tuning for an algorithm that needs one: the given file, else computed on
/// the spot when n is small enough.
csg::TuningResult resolve_tuning(int n, std::optional<std::string> const &path)
{
  if (path)
  {
    try
    {
      return csg::load_tuning(*path, n);
    }
    catch (csg::TuningFileError const &e)
    {
      throw UsageError(e.what());
    }
  }
  if (n < 4)
  {
    return csg::trivial_tuning(n);
  }
  if (n > csg::kExactTuningCap)
  {
    throw UsageError("no tuning for n=" + std::to_string(n) + ": exact tuning is capped at n=" +
                     std::to_string(csg::kExactTuningCap) + "; run `csg tune --n " + std::to_string(n) +
                     " --force-idp-fallback --out FILE` and pass --tuning FILE");
  }
  return csg::tuning_for(n);
}

csg::SolverResult run_algorithm(std::string const &algo, csg::CharacteristicFunction const &v,
                                csg::SolveOptions const &opts, std::optional<std::string> const &tuning_path)
{
  int const n = v.agents();
  if (algo == "brute")
  {
    if (n > csg::kBruteForceCap)
    {
      throw UsageError("brute force refuses n > " + std::to_string(csg::kBruteForceCap));
    }
    return csg::brute_force_solve(v, opts);
  }
  if (algo == "dp")
  {
    return csg::dp_solve(v, opts);
  }
  if (algo == "idp")
  {
    return csg::idp_solve(v, opts);
  }
  if (algo == "dips")
  {
    return csg::dips_solve(v, opts);
  }
  auto const tuning = resolve_tuning(n, tuning_path);
  if (algo == "cdp")
  {
    return csg::cdp_solve(v, tuning.cdp_pair, opts);
  }
  if (algo == "grad")
  {
    return csg::grad_solve(v, tuning.grad_sets(), opts);
  }
  return csg::smart_solve(v, tuning, opts);
}

void write_output(std::optional<std::string> const &out, std::string const &text)
{
  if (!out)
  {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream os(*out, std::ios::binary);
  if (!os)
  {
    throw UsageError("cannot open " + *out + " for writing");
  }
  os << text;
}

/// "uniform,normal:var=2,mu=5" -> {"uniform", "normal:var=2,mu=5"}: a token
/// with '=' but no ':' continues the previous spec's parameter list.
std::vector<std::string> split_dist_list(std::string const &text)
{
  std::vector<std::string> out;
  std::stringstream        ss(text);
  std::string              tok;
  while (std::getline(ss, tok, ','))
  {
    if (tok.empty())
    {
      continue;
    }
    if (!out.empty() && tok.find('=') != std::string::npos && tok.find(':') == std::string::npos)
    {
      out.back() += "," + tok;
    }
    else
    {
      out.push_back(tok);
    }
  }
  return out;
}

std::pair<int, int> parse_range(std::string const &text)
{
  auto const dots = text.find("..");
  try
  {
    if (dots == std::string::npos)
    {
      int const a = std::stoi(text);
      return {a, a};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  }
  catch (std::exception const &)
  {
    throw UsageError("--n-range expects A..B, got '" + text + "'");
  }
}

//------------------------------------------------------------------------------
// solve
//------------------------------------------------------------------------------

struct SolveArgs
{
  std::optional<std::string>   input;
  std::optional<std::string>   dist;
  std::optional<int>           n;
  std::optional<std::uint64_t> seed;
  std::string                  algo{"smart"};
  std::optional<std::string>   tuning;
  int                          threads{0};
  bool                         deterministic{false};
  std::optional<double>        timeout;
  std::string                  format{"json"};
  std::optional<std::string>   out;
  std::optional<std::string>   save_problem;
  bool                         progress{false};
};

int cmd_solve(SolveArgs const &a)
{
  bool const generated = a.dist || a.n || a.seed;
  if (a.input && generated)
  {
    throw UsageError("give either --input or --dist/--n/--seed, not both");
  }
  if (!a.input && !(a.dist && a.n && a.seed))
  {
    throw UsageError("give --input FILE, or all of --dist SPEC --n N --seed S");
  }

  csg::ResultRecord rec;
  rec.algorithm = a.algo;
  std::optional<csg::CharacteristicFunction> v;
  if (a.input)
  {
    try
    {
      if (a.input->ends_with(".csv"))
      {
        std::ifstream is(*a.input);
        if (!is)
        {
          throw csg::ProblemFileError("cannot open " + *a.input);
        }
        v = csg::read_problem_csv(is);
      }
      else
      {
        v = csg::load_problem(*a.input);
      }
    }
    catch (csg::ValidationError const &e)
    {
      throw UsageError(e.what());
    }
  }
  else
  {
    csg::DistributionSpec spec;
    try
    {
      spec = csg::parse_distribution_spec(*a.dist, *a.seed);
      csg::check_agent_count(*a.n);
      csg::GenerationReport report;
      v = csg::generate(spec, *a.n, &report);
      if (report.clamped > 0)
      {
        std::cerr << "generate: clamped " << report.clamped << " negative values to 0\n";
      }
    }
    catch (csg::ArgumentError const &e)
    {
      throw UsageError(e.what());
    }
    rec.distribution = spec.to_string();
    rec.seed         = *a.seed;
    rec.generator    = csg::kGeneratorId;
  }
  rec.n = v->agents();

  if (a.save_problem)
  {
    csg::save_problem(*a.save_problem, *v);
  }

  csg::SolveOptions opts;
  opts.threads         = a.threads > 0 ? a.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  opts.deterministic   = a.deterministic;
  opts.timeout_seconds = a.timeout;
  if (a.progress)
  {
    auto last      = std::make_shared<std::chrono::steady_clock::time_point>();
    opts.on_progress = [last](csg::ProgressSnapshot const &p) {
      auto const now = std::chrono::steady_clock::now();
      if (now - *last < std::chrono::milliseconds(200))
      {
        return;
      }
      *last = now;
      std::cerr << "progress incumbent=" << csg::format_double(p.incumbent)
                << " subspaces_remaining=" << p.subspaces_remaining << " splits=" << p.splits_done << '\n';
    };
  }

  rec.result = run_algorithm(a.algo, *v, opts, a.tuning);

  std::string text;
  if (a.format == "csv")
  {
    text = csg::csv_header() + "\n" + csg::record_to_csv(rec) + "\n";
  }
  else
  {
    text = csg::record_to_json(rec).dump(2) + "\n";
  }
  write_output(a.out, text);
  if (!rec.result.optimal)
  {
    std::cerr << "solve: stopped before optimality was proven; reporting the best structure found\n";
    return kExitTimeout;
  }
  return kExitOk;
}

//------------------------------------------------------------------------------
// tune
//------------------------------------------------------------------------------

struct TuneArgs
{
  int                        n{0};
  std::vector<double>        omegas = csg::default_omegas();
  std::optional<std::string> out;
  std::optional<std::string> dot;
  bool                       force_idp_fallback{false};
};

int cmd_tune(TuneArgs const &a)
{
  if (a.n < 4)
  {
    throw UsageError("tune needs n >= 4: with fewer agents there are no sizes to choose between");
  }
  if (a.n > csg::kMaxAgents)
  {
    throw UsageError("n must be at most " + std::to_string(csg::kMaxAgents));
  }
  for (double w : a.omegas)
  {
    if (!(w > 0.0 && w <= 1.0))
    {
      throw UsageError("omegas must lie in (0, 1]");
    }
  }
  csg::TuningResult tr;
  if (a.n > csg::kExactTuningCap)
  {
    if (!a.force_idp_fallback)
    {
      throw UsageError("exact tuning is capped at n=" + std::to_string(csg::kExactTuningCap) +
                       "; pass --force-idp-fallback to use the improved-DP size set for every pass, "
                       "or solve with --algo dips/idp/dp which need no tuning");
    }
    tr = csg::idp_fallback_tuning(a.n);
  }
  else if (a.force_idp_fallback)
  {
    tr = csg::idp_fallback_tuning(a.n);
  }
  else
  {
    tr = csg::tune_all(a.n, a.omegas, csg::CostModel::unit(a.n));
  }
  write_output(a.out, csg::tuning_to_json(tr).dump(2) + "\n");
  if (a.dot)
  {
    std::ofstream os(*a.dot);
    if (!os)
    {
      throw UsageError("cannot open " + *a.dot + " for writing");
    }
    csg::partition_graph(a.n).write_dot(os);
  }
  return kExitOk;
}

//------------------------------------------------------------------------------
// bench
//------------------------------------------------------------------------------

struct BenchArgs
{
  std::string                dists{"uniform"};
  std::string                n_range{"8..10"};
  int                        reps{1};
  std::string                algos{"smart,brute"};
  std::optional<std::string> out;
  std::uint64_t              base_seed{0};
  int                        threads{1};
  std::optional<double>      timeout;
};

int cmd_bench(BenchArgs const &a)
{
  auto const [lo, hi] = parse_range(a.n_range);
  if (lo < 1 || hi > csg::kMaxAgents || lo > hi)
  {
    throw UsageError("--n-range must satisfy 1 <= A <= B <= " + std::to_string(csg::kMaxAgents));
  }
  if (a.reps < 0)
  {
    throw UsageError("--reps must be non-negative");
  }
  std::vector<std::string> algos;
  {
    std::stringstream ss(a.algos);
    std::string       tok;
    while (std::getline(ss, tok, ','))
    {
      if (std::find(kAlgorithms.begin(), kAlgorithms.end(), tok) == kAlgorithms.end())
      {
        throw UsageError("unknown algorithm '" + tok + "'");
      }
      algos.push_back(tok);
    }
  }
  std::vector<csg::DistributionSpec> specs;
  for (auto const &d : split_dist_list(a.dists))
  {
    try
    {
      specs.push_back(csg::parse_distribution_spec(d));
    }
    catch (csg::ArgumentError const &e)
    {
      throw UsageError(e.what());
    }
  }

  std::ofstream file;
  if (a.out)
  {
    file.open(*a.out, std::ios::binary);
    if (!file)
    {
      throw UsageError("cannot open " + *a.out + " for writing");
    }
  }
  std::ostream &os = a.out ? static_cast<std::ostream &>(file) : std::cout;
  os << csg::csv_header() << '\n';

  csg::SolveOptions opts;
  opts.threads         = std::max(1, a.threads);
  opts.deterministic   = a.threads <= 1;
  opts.timeout_seconds = a.timeout;

  for (auto spec : specs)
  {
    for (int n = lo; n <= hi; ++n)
    {
      for (int r = 0; r < a.reps; ++r)
      {
        spec.seed = a.base_seed + static_cast<std::uint64_t>(r);
        std::optional<csg::CharacteristicFunction> v;
        std::string                                gen_error;
        try
        {
          v = csg::generate(spec, n);
        }
        catch (std::exception const &e)
        {
          gen_error = e.what();
        }
        for (auto const &algo : algos)
        {
          csg::ResultRecord rec;
          rec.n            = n;
          rec.algorithm    = algo;
          rec.distribution = spec.to_string();
          rec.seed         = spec.seed;
          std::string status = "ok";
          if (!v)
          {
            status = "error: " + gen_error;
          }
          else
          {
            try
            {
              rec.result = run_algorithm(algo, *v, opts, std::nullopt);
              if (!rec.result.optimal)
              {
                status = "timeout";
              }
            }
            catch (std::exception const &e)
            {
              status = std::string("error: ") + e.what();
            }
          }
          os << csg::record_to_csv(rec, status) << '\n';
          os.flush();
        }
      }
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Optimal coalition structure generation"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto     *solve = app.add_subcommand("solve", "Solve one instance");
  solve->add_option("--input", sa.input, "Problem file (binary CSGV, or .csv with mask,value rows)");
  solve->add_option("--dist", sa.dist, "Distribution spec, name[:key=val,...]");
  solve->add_option("--n", sa.n, "Agent count for a generated instance");
  solve->add_option("--seed", sa.seed, "Seed for a generated instance");
  solve->add_option("--algo", sa.algo, "Algorithm")->check(CLI::IsMember(kAlgorithms));
  solve->add_option("--tuning", sa.tuning, "Tuning file from `csg tune`");
  solve->add_option("--threads", sa.threads, "Worker threads (default: logical cores)")->check(CLI::NonNegativeNumber);
  solve->add_flag("--deterministic", sa.deterministic, "Single worker, fixed round-robin schedule");
  solve->add_option("--timeout", sa.timeout, "Seconds before returning the best structure found")
      ->check(CLI::PositiveNumber);
  solve->add_option("--format", sa.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  solve->add_option("--out", sa.out, "Write the result here instead of stdout");
  solve->add_option("--save-problem", sa.save_problem, "Also write the instance as a problem file");
  solve->add_flag("--progress", sa.progress, "Log progress snapshots to stderr");

  TuneArgs ta;
  auto    *tune = app.add_subcommand("tune", "Compute size-set tuning for one n");
  tune->add_option("--n", ta.n, "Agent count")->required();
  tune->add_option("--omegas", ta.omegas, "Coverage fractions for the gradual processes")->delimiter(',');
  tune->add_option("--out", ta.out, "Tuning file to write (default stdout)");
  tune->add_option("--dot", ta.dot, "Also write the integer partition graph as DOT");
  tune->add_flag("--force-idp-fallback", ta.force_idp_fallback,
                 "Use the improved-DP size set for every pass instead of exact tuning");

  BenchArgs ba;
  auto     *bench = app.add_subcommand("bench", "Run algorithms over generated instances, CSV out");
  bench->add_option("--dists", ba.dists, "Comma-separated distribution specs");
  bench->add_option("--n-range", ba.n_range, "Agent counts A..B");
  bench->add_option("--reps", ba.reps, "Seeds per (distribution, n)");
  bench->add_option("--algos", ba.algos, "Comma-separated algorithms");
  bench->add_option("--out", ba.out, "CSV file to write (default stdout)");
  bench->add_option("--base-seed", ba.base_seed, "Seed of the first repetition");
  bench->add_option("--threads", ba.threads, "Worker threads per run (1 = deterministic)");
  bench->add_option("--timeout", ba.timeout, "Per-run timeout in seconds")->check(CLI::PositiveNumber);

  try
  {
    app.parse(argc, argv);
  }
  catch (CLI::ParseError const &e)
  {
    int const code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try
  {
    if (*solve)
    {
      return cmd_solve(sa);
    }
    if (*tune)
    {
      return cmd_tune(ta);
    }
    return cmd_bench(ba);
  }
  catch (UsageError const &e)
  {
    std::cerr << "csg: " << e.what() << '\n';
    return kExitUsage;
  }
  catch (csg::ArgumentError const &e)
  {
    std::cerr << "csg: " << e.what() << '\n';
    return kExitUsage;
  }
  catch (std::exception const &e)
  {
    std::cerr << "csg: " << e.what() << '\n';
    return kExitFailure;
  }
}
