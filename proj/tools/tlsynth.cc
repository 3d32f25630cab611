// tlsynth: synthesize, evaluate and stress-test time-local online algorithms.
//
// Exit codes: 0 success, 1 a --verify-lower-bound run found a counterexample,
// 2 invalid input (parse/validation/argument errors), 3 a size guard tripped.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tlsynth/analytical.h"
#include "tlsynth/debruijn.h"
#include "tlsynth/error.h"
#include "tlsynth/harness.h"
#include "tlsynth/policy.h"
#include "tlsynth/policy_io.h"
#include "tlsynth/problem.h"
#include "tlsynth/problem_io.h"
#include "tlsynth/ratio_cycle.h"
#include "tlsynth/synthesis.h"

namespace {

using namespace tlsynth;
using nlohmann::ordered_json;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteOutput(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
  out << text;
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Options shared by every subcommand that works on a problem.
struct ProblemArgs {
  std::string problem;
  std::vector<std::string> params;

  void Attach(CLI::App* app) {
    app->add_option("--problem", problem, "problem file or bundled name")->required();
    app->add_option("--param", params, "parameter override name=value (repeatable)");
  }

  LocalProblem Load() const {
    LocalProblem base = std::filesystem::is_regular_file(problem) ? LoadProblem(ReadFile(problem))
                                                                  : BundledProblem(problem);
    if (params.empty()) return base;
    ParameterMap overrides;
    for (const std::string& p : params) {
      auto eq = p.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw Error(ErrorCode::kInvalidArgument, "--param expects name=value, got '" + p + "'");
      }
      overrides[p.substr(0, eq)] = Rational::Parse(p.substr(eq + 1));
    }
    return base.WithParameters(overrides);
  }
};

Rational Alpha(const LocalProblem& problem) {
  auto it = problem.parameters().find("alpha");
  if (it == problem.parameters().end()) {
    throw Error(ErrorCode::kInvalidArgument, "algorithm needs an 'alpha' problem parameter");
  }
  return it->second;
}

Sequence ReadInput(const LocalProblem& problem, const std::string& text) {
  std::string body = text;
  if (!body.empty() && body[0] == '@') body = ReadFile(body.substr(1));
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.pop_back();
  return problem.inputs().ParseSequence(body);
}

struct AlgorithmArgs {
  std::string algorithm;
  int horizon = 0;  // 0: the algorithm's default
  std::optional<int> k;

  void Attach(CLI::App* app) {
    app->add_option("--algorithm", algorithm,
                    "policy file | sliding-window | mixed-resetting | coin-flip | reset-wrapper")
        ->required();
    app->add_option("--horizon", horizon, "horizon T for analytical algorithms");
    app->add_option("--k", k, "mixed-resetting: fixed first reset time (otherwise drawn per trial)");
  }

  int HorizonOr(int fallback) const { return horizon > 0 ? horizon : fallback; }

  MeasuredAlgorithm Build(const LocalProblem& problem) const {
    if (algorithm == "sliding-window") {
      Rational alpha = Alpha(problem);
      return Measure(std::make_shared<SlidingWindowAlgorithm>(HorizonOr(6), alpha));
    }
    if (algorithm == "mixed-resetting") {
      int t = HorizonOr(MixedResettingHorizon(Alpha(problem).ToDouble()));
      if (k) return Measure(std::make_shared<MixedResettingStrategy>(t, *k));
      return MeasureMixedResetting(t);
    }
    if (algorithm == "coin-flip") return MeasureCoinFlip(Alpha(problem));
    if (algorithm == "reset-wrapper") {
      Rational alpha = Alpha(problem);
      return Measure(std::make_shared<ResetWrapper>(HorizonOr(1), RentOrBuyMigration(alpha), "rent-or-buy"));
    }
    AnyPolicy policy = LoadPolicy(ReadFile(algorithm));
    if (auto* det = std::get_if<DeterministicPolicy>(&policy)) {
      return Measure(std::make_shared<DeterministicPolicy>(std::move(*det)));
    }
    return Measure(std::get<RandomizedPolicy>(std::move(policy)));
  }
};

std::string CostText(const ExtendedCost& c) {
  return c.IsFinite() ? c.value().ToString() : c.ToString();
}

int RunSynth(const ProblemArgs& pa, int horizon, bool randomized, const std::string& grid_step, bool all_optimal,
             int jobs, bool no_forcing, bool no_pruning, const std::string& lower_bound, const std::string& out) {
  LocalProblem problem = pa.Load();
  SynthesisConfig config;
  config.horizon = horizon;
  config.collect_all_optimal = all_optimal;
  config.jobs = jobs;
  config.force_self_loops = !no_forcing;
  config.prune_short_cycles = !no_pruning;
  if (!grid_step.empty()) config.grid_step = Rational::Parse(grid_step);
  if (!lower_bound.empty()) config.verify_lower_bound = Rational::Parse(lower_bound);
  SynthesisResult result = randomized ? SynthesizeRand(problem, config) : SynthesizeDet(problem, config);
  WriteOutput(out, DumpSynthesisResult(problem, config, result));
  std::cerr << "ratio " << result.best_ratio.ToString() << " (" << result.best_ratio.ToDecimal(4) << "), "
            << result.counters.candidates_examined << " candidates, " << result.counters.seconds << " s\n";
  if (config.verify_lower_bound && !result.lower_bound_holds) {
    std::cerr << "lower bound " << config.verify_lower_bound->ToString() << " fails for "
              << result.counterexamples.size() << " candidate(s)\n";
    return 1;
  }
  return 0;
}

int RunEval(const ProblemArgs& pa, const std::string& policy_path, const std::string& out) {
  LocalProblem problem = pa.Load();
  AnyPolicy policy = LoadPolicy(ReadFile(policy_path));
  DualGraph graph = std::visit(
      [&](const auto& p) {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, DeterministicPolicy>) {
          return BuildGraphDet(problem, p);
        } else {
          return BuildGraphRand(problem, p);
        }
      },
      policy);
  WriteOutput(out, DumpVerdict(graph, MaxRatioCycle(graph)) + "\n");
  return 0;
}

int RunOpt(const ProblemArgs& pa, const std::string& input, const std::string& out) {
  LocalProblem problem = pa.Load();
  Sequence x = ReadInput(problem, input);
  OptResult opt = OfflineOpt(problem, x);
  ordered_json doc;
  doc["input"] = problem.inputs().Format(x);
  doc["cost"] = CostText(opt.cost);
  doc["outputs"] = problem.outputs().Format(opt.outputs);
  WriteOutput(out, doc.dump(2) + "\n");
  return 0;
}

int RunSimulate(const ProblemArgs& pa, const AlgorithmArgs& aa, const std::string& input, uint64_t seed,
                const std::string& out) {
  LocalProblem problem = pa.Load();
  Sequence x = ReadInput(problem, input);
  MeasuredAlgorithm alg = aa.Build(problem);
  Sequence y = alg.run(x, seed);
  ExecutionTrace trace =
      MakeTrace(problem, x, std::move(y), alg.randomized ? std::optional<uint64_t>(seed) : std::nullopt);
  ordered_json doc;
  doc["algorithm"] = alg.name;
  doc["inputs"] = problem.inputs().Format(trace.inputs);
  doc["outputs"] = problem.outputs().Format(trace.outputs);
  ordered_json steps = ordered_json::array();
  for (const ExtendedCost& c : trace.cost.per_step) steps.push_back(CostText(c));
  doc["per_step"] = steps;
  doc["total"] = CostText(trace.cost.total);
  doc["opt"] = CostText(OfflineOpt(problem, trace.inputs).cost);
  if (trace.seed) doc["seed"] = *trace.seed;
  WriteOutput(out, doc.dump(2) + "\n");
  return 0;
}

int RunMeasure(const ProblemArgs& pa, const AlgorithmArgs& aa, const std::string& generator, int64_t trials,
               uint64_t seed, const std::string& check, const std::string& out) {
  LocalProblem problem = pa.Load();
  MeasuredAlgorithm alg = aa.Build(problem);
  std::optional<Guarantee> guarantee;
  if (!check.empty()) {
    Guarantee g;
    bool have_c = false, have_d = false;
    for (const std::string& kv : SplitList(check)) {
      auto eq = kv.find('=');
      std::string key = kv.substr(0, eq);
      if (eq == std::string::npos || (key != "c" && key != "d")) {
        throw Error(ErrorCode::kInvalidArgument, "--check expects c=<rational>,d=<rational>");
      }
      (key == "c" ? g.c : g.d) = Rational::Parse(kv.substr(eq + 1));
      (key == "c" ? have_c : have_d) = true;
    }
    if (!have_c || !have_d) throw Error(ErrorCode::kInvalidArgument, "--check needs both c and d");
    guarantee = g;
  }
  RunRecord rec = MeasureRatio(alg, problem, GeneratorSpec::Parse(generator), trials, seed, guarantee);
  WriteOutput(out, RunRecord::CsvHeader() + "\n" + rec.ToCsv() + "\n");
  return 0;
}

int RunTable2(const std::string& alphas, const std::string& horizons, bool randomized, int jobs,
              const std::string& out) {
  std::vector<Rational> a;
  for (const std::string& s : SplitList(alphas)) a.push_back(Rational::Parse(s));
  std::vector<int> t;
  for (const std::string& s : SplitList(horizons)) {
    try {
      t.push_back(std::stoi(s));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "--horizons expects integers, got '" + s + "'");
    }
  }
  SynthesisConfig config;
  config.jobs = jobs;
  WriteOutput(out, EmitTable2(a, t, randomized, config));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesis and analysis of time-local online algorithms"};
  app.require_subcommand(1);
  std::string out;

  ProblemArgs synth_pa;
  int synth_horizon = 1, jobs = 1;
  bool randomized = false, all_optimal = false, no_forcing = false, no_pruning = false;
  std::string grid_step, lower_bound;
  CLI::App* synth = app.add_subcommand("synth", "search for an optimal time-local policy");
  synth_pa.Attach(synth);
  synth->add_option("--horizon", synth_horizon, "horizon T")->required()->check(CLI::PositiveNumber);
  synth->add_flag("--randomized", randomized, "search randomized tables (binary outputs)");
  synth->add_option("--grid-step", grid_step, "randomized grid step (default 1/20)");
  synth->add_flag("--all-optimal", all_optimal, "report every optimal table");
  synth->add_option("--jobs", jobs, "worker threads, 0 = all cores");
  synth->add_flag("--no-forcing", no_forcing, "disable self-loop forcing");
  synth->add_flag("--no-pruning", no_pruning, "disable short-cycle pruning");
  synth->add_option("--verify-lower-bound", lower_bound,
                    "only check that every candidate has a cycle of ratio >= R (long-running)");
  synth->add_option("--out", out, "output file (default stdout)");

  ProblemArgs eval_pa;
  std::string policy_path;
  CLI::App* eval = app.add_subcommand("eval", "exact competitive ratio of a policy table");
  eval_pa.Attach(eval);
  eval->add_option("--policy", policy_path, "policy or synthesis-result file")->required();
  eval->add_option("--out", out, "output file (default stdout)");

  ProblemArgs opt_pa;
  std::string input;
  CLI::App* opt = app.add_subcommand("opt", "offline optimum of an input sequence");
  opt_pa.Attach(opt);
  opt->add_option("--input", input, "input sequence or @file")->required();
  opt->add_option("--out", out, "output file (default stdout)");

  ProblemArgs sim_pa;
  AlgorithmArgs sim_aa;
  uint64_t seed = 0;
  CLI::App* simulate = app.add_subcommand("simulate", "run an algorithm on one input sequence");
  sim_pa.Attach(simulate);
  sim_aa.Attach(simulate);
  simulate->add_option("--input", input, "input sequence or @file")->required();
  simulate->add_option("--seed", seed, "coin seed for randomized algorithms");
  simulate->add_option("--out", out, "output file (default stdout)");

  ProblemArgs meas_pa;
  AlgorithmArgs meas_aa;
  std::string generator, check;
  int64_t trials = 1;
  CLI::App* measure = app.add_subcommand("measure", "empirical ratio against the offline optimum");
  meas_pa.Attach(measure);
  meas_aa.Attach(measure);
  measure->add_option("--generator", generator, "blocks:T=..,L=.. | adaptive:L=..,cutoff=.. | uniform:n=..,p=..,seed=..")
      ->required();
  measure->add_option("--trials", trials, "number of trials")->check(CLI::PositiveNumber);
  measure->add_option("--seed", seed, "base seed for per-trial coins");
  measure->add_option("--check", check, "guarantee c=..,d=.. to test cost <= c*OPT + d");
  measure->add_option("--out", out, "output file (default stdout)");

  std::string alphas, horizons;
  CLI::App* table2 = app.add_subcommand("table2", "file-migration ratio table as CSV");
  table2->add_option("--alphas", alphas, "comma-separated alphas")->required();
  table2->add_option("--horizons", horizons, "comma-separated horizons")->required();
  table2->add_flag("--randomized", randomized, "also synthesize randomized tables");
  table2->add_option("--jobs", jobs, "worker threads, 0 = all cores");
  table2->add_option("--out", out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*synth) {
      return RunSynth(synth_pa, synth_horizon, randomized, grid_step, all_optimal, jobs, no_forcing, no_pruning,
                      lower_bound, out);
    }
    if (*eval) return RunEval(eval_pa, policy_path, out);
    if (*opt) return RunOpt(opt_pa, input, out);
    if (*simulate) return RunSimulate(sim_pa, sim_aa, input, seed, out);
    if (*measure) return RunMeasure(meas_pa, meas_aa, generator, trials, seed, check, out);
    if (*table2) return RunTable2(alphas, horizons, randomized, jobs, out);
  } catch (const Error& e) {
    std::cerr << "tlsynth: " << e.what() << "\n";
    return e.IsGuard() ? 3 : 2;
  }
  return 0;
}
