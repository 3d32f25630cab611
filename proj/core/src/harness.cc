#include "tlsynth/harness.h"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "tlsynth/analytical.h"
#include "tlsynth/error.h"
#include "tlsynth/problem_io.h"

namespace tlsynth {
namespace {

constexpr Symbol kZero = 0;
constexpr Symbol kOne = 1;

std::map<std::string, std::string> KeyValues(std::string_view text, std::string_view what) {
  std::map<std::string, std::string> out;
  while (!text.empty()) {
    std::size_t comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw Error(ErrorCode::kParse, std::string(what) + ": expected key=value, got '" + std::string(item) + "'");
    }
    out[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

int64_t ToInt(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParse, "generator parameter " + key + ": expected an integer, got '" + text + "'");
  }
}

Sequence GenerateFor(const GeneratorSpec& spec, const MeasuredAlgorithm& algorithm, uint64_t trial, bool* cutoff_hit) {
  switch (spec.kind) {
    case GeneratorSpec::Kind::kBlocks:
      return GenBlocks(spec.block_length, spec.repetitions);
    case GeneratorSpec::Kind::kAdaptive: {
      if (!algorithm.deterministic) {
        throw Error(ErrorCode::kInvalidArgument, "the adaptive generator needs a deterministic algorithm");
      }
      AdaptiveInput in = GenAdaptive(*algorithm.deterministic, spec.repetitions, spec.cutoff);
      *cutoff_hit = *cutoff_hit || in.cutoff_hit;
      return in.inputs;
    }
    case GeneratorSpec::Kind::kUniform:
      return GenUniform(spec.length, spec.p, CoinSource::TrialSeed(spec.seed, trial));
    case GeneratorSpec::Kind::kFixed:
      return spec.fixed;
  }
  return {};
}

Rational FiniteTotal(const ExtendedCost& c, const char* what) {
  if (!c.IsFinite()) throw Error(ErrorCode::kUnsupported, std::string(what) + " cost is " + c.ToString());
  return c.value();
}

}  // namespace

GeneratorSpec GeneratorSpec::Parse(std::string_view text) {
  GeneratorSpec spec;
  std::size_t colon = text.find(':');
  std::string_view kind = text.substr(0, colon);
  std::string_view rest = colon == std::string_view::npos ? std::string_view() : text.substr(colon + 1);
  if (kind == "fixed") {
    spec.kind = Kind::kFixed;
    for (char c : rest) {
      if (c == '0' || c == '1') {
        spec.fixed.push_back(c == '1' ? kOne : kZero);
      } else if (c != ',') {
        throw Error(ErrorCode::kParse, "fixed generator takes a 0/1 string");
      }
    }
    return spec;
  }
  auto kv = KeyValues(rest, "generator");
  auto take = [&](const char* key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  if (kind == "blocks") {
    spec.kind = Kind::kBlocks;
    if (auto v = take("T")) spec.block_length = ToInt(*v, "T");
    if (auto v = take("L")) spec.repetitions = ToInt(*v, "L");
  } else if (kind == "adaptive") {
    spec.kind = Kind::kAdaptive;
    if (auto v = take("L")) spec.repetitions = ToInt(*v, "L");
    if (auto v = take("cutoff")) spec.cutoff = ToInt(*v, "cutoff");
  } else if (kind == "uniform") {
    spec.kind = Kind::kUniform;
    if (auto v = take("n")) spec.length = ToInt(*v, "n");
    if (auto v = take("p")) spec.p = Rational::Parse(*v);
    if (auto v = take("seed")) spec.seed = static_cast<uint64_t>(ToInt(*v, "seed"));
  } else {
    throw Error(ErrorCode::kParse, "unknown generator '" + std::string(kind) + "'");
  }
  if (!kv.empty()) throw Error(ErrorCode::kParse, "unknown generator parameter '" + kv.begin()->first + "'");
  if (spec.block_length < 1 || spec.repetitions < 1 || spec.length < 0 || spec.cutoff < 1) {
    throw Error(ErrorCode::kValidation, "generator parameters out of range");
  }
  if (spec.p < Rational(0) || spec.p > Rational(1)) throw Error(ErrorCode::kValidation, "p must lie in [0, 1]");
  return spec;
}

std::string GeneratorSpec::ToString() const {
  switch (kind) {
    case Kind::kBlocks:
      return "blocks:T=" + std::to_string(block_length) + ",L=" + std::to_string(repetitions);
    case Kind::kAdaptive:
      return "adaptive:L=" + std::to_string(repetitions) + ",cutoff=" + std::to_string(cutoff);
    case Kind::kUniform:
      return "uniform:n=" + std::to_string(length) + ",p=" + p.ToString() + ",seed=" + std::to_string(seed);
    case Kind::kFixed: {
      std::string s = "fixed:";
      for (Symbol x : fixed) s += x == kOne ? '1' : '0';
      return s;
    }
  }
  return "";
}

Sequence GenBlocks(int64_t block_length, int64_t repetitions) {
  if (block_length < 1 || repetitions < 1) throw Error(ErrorCode::kInvalidArgument, "blocks need T >= 1 and L >= 1");
  Sequence out;
  out.reserve(2 * block_length * repetitions);
  for (int64_t l = 0; l < repetitions; ++l) {
    out.insert(out.end(), block_length, kOne);
    out.insert(out.end(), block_length, kZero);
  }
  return out;
}

AdaptiveInput GenAdaptive(const OnlineAlgorithm& algorithm, int64_t repetitions, int64_t cutoff) {
  AdaptiveInput out;
  auto next_output = [&] {
    int64_t i = static_cast<int64_t>(out.inputs.size()) + 1;
    return algorithm.Output(VisibleWindow(out.inputs, algorithm.horizon(), i), i);
  };
  for (int64_t phase = 0; phase < 2 * repetitions; ++phase) {
    const Symbol target = phase % 2 == 0 ? kOne : kZero;
    int64_t emitted = 0;
    do {
      out.inputs.push_back(target);
      ++emitted;
    } while (next_output() != target && emitted < cutoff);
    if (next_output() != target) out.cutoff_hit = true;
  }
  return out;
}

Sequence GenUniform(int64_t length, const Rational& p, uint64_t seed) {
  CoinSource coins(seed);
  Sequence out;
  out.reserve(length);
  for (int64_t i = 0; i < length; ++i) out.push_back(coins.Bernoulli(p) ? kOne : kZero);
  return out;
}

MeasuredAlgorithm Measure(std::shared_ptr<const OnlineAlgorithm> algorithm) {
  MeasuredAlgorithm m;
  m.name = algorithm->Describe();
  m.deterministic = algorithm;
  m.run = [algorithm](std::span<const Symbol> x, uint64_t) { return RunPolicy(*algorithm, x); };
  return m;
}

MeasuredAlgorithm Measure(RandomizedPolicy policy) {
  MeasuredAlgorithm m;
  m.name = "randomized-table(T=" + std::to_string(policy.horizon()) + ")";
  m.randomized = true;
  m.run = [policy = std::move(policy)](std::span<const Symbol> x, uint64_t seed) {
    return RunRandomizedOutputs(policy, x, seed);
  };
  return m;
}

MeasuredAlgorithm MeasureMixedResetting(int horizon) {
  MeasuredAlgorithm m;
  m.name = "mixed-resetting(T=" + std::to_string(horizon) + ")";
  m.randomized = true;
  m.run = [horizon](std::span<const Symbol> x, uint64_t seed) {
    return RunPolicy(SampleMixedResetting(horizon, seed), x);
  };
  return m;
}

MeasuredAlgorithm MeasureCoinFlip(const Rational& alpha) {
  CoinFlipMoveProbability(alpha);  // validates
  MeasuredAlgorithm m;
  m.name = "coin-flip(alpha=" + alpha.ToString() + ")";
  m.randomized = true;
  m.run = [alpha](std::span<const Symbol> x, uint64_t seed) { return RunCoinFlip(x, alpha, seed); };
  return m;
}

std::string RunRecord::CsvHeader() {
  return "generator,algorithm,trials,length,mean_cost,mean_opt,ratio,mean_ratio,stderr,check,violations,cutoff_hit,"
         "seed";
}

std::string RunRecord::ToCsv() const {
  auto quote = [](const std::string& s) { return "\"" + s + "\""; };
  auto real = [](double v) {
    if (std::isinf(v)) return std::string("∞");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return std::string(buf);
  };
  std::ostringstream os;
  os << quote(generator) << ',' << quote(algorithm) << ',' << trials << ',' << length << ','
     << mean_cost.ToDecimal(4) << ',' << mean_opt.ToDecimal(4) << ',' << ratio << ',' << real(mean_ratio) << ','
     << real(stderr_ratio) << ',';
  if (check) {
    os << quote("c=" + check->c.ToString() + ",d=" + check->d.ToString()) << ',' << violations;
  } else {
    os << ",";
  }
  os << ',' << (cutoff_hit ? "true" : "false") << ',' << seed;
  return os.str();
}

RunRecord MeasureRatio(const MeasuredAlgorithm& algorithm, const LocalProblem& problem,
                       const GeneratorSpec& generator, int64_t trials, uint64_t seed,
                       std::optional<Guarantee> check) {
  if (trials < 1) throw Error(ErrorCode::kInvalidArgument, "trials must be at least 1");
  RunRecord rec;
  rec.generator = generator.ToString();
  rec.algorithm = algorithm.name;
  rec.trials = trials;
  rec.check = check;
  rec.seed = seed;

  const bool fresh_inputs = generator.kind == GeneratorSpec::Kind::kUniform;
  Sequence x;
  Rational opt;
  Rational total_cost(0), total_opt(0);
  double sum = 0, sum_sq = 0;
  bool infinite = false;
  for (int64_t t = 0; t < trials; ++t) {
    // OPT depends only on the sequence, never on the coins.
    if (t == 0 || fresh_inputs) {
      x = GenerateFor(generator, algorithm, static_cast<uint64_t>(t), &rec.cutoff_hit);
      opt = FiniteTotal(OfflineOpt(problem, x).cost, "offline");
    }
    Sequence y = algorithm.run(x, CoinSource::TrialSeed(seed, static_cast<uint64_t>(t)));
    Rational cost = FiniteTotal(Evaluate(problem, x, y).total, "algorithm");
    total_cost += cost;
    total_opt += opt;
    if (check && cost > check->c * opt + check->d) ++rec.violations;
    if (opt.IsZero()) {
      if (!cost.IsZero()) infinite = true;
      sum += 1;
      sum_sq += 1;
    } else {
      double r = (cost / opt).ToDouble();
      sum += r;
      sum_sq += r * r;
    }
    rec.length = static_cast<int64_t>(x.size());
  }
  rec.mean_cost = total_cost / Rational(trials);
  rec.mean_opt = total_opt / Rational(trials);
  if (total_opt.IsZero()) {
    rec.ratio = total_cost.IsZero() ? "1.0000" : "∞";
  } else {
    rec.ratio = (total_cost / total_opt).ToDecimal(4);
  }
  if (infinite) {
    rec.mean_ratio = std::numeric_limits<double>::infinity();
    rec.stderr_ratio = std::numeric_limits<double>::infinity();
  } else {
    const double n = static_cast<double>(trials);
    rec.mean_ratio = sum / n;
    double var = trials > 1 ? std::max(0.0, (sum_sq - n * rec.mean_ratio * rec.mean_ratio) / (n - 1)) : 0.0;
    rec.stderr_ratio = std::sqrt(var / n);
  }
  return rec;
}

std::string FormatRational(const Rational& value) {
  int64_t den = value.den();
  int twos = 0, fives = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++twos;
  }
  while (den % 5 == 0) {
    den /= 5;
    ++fives;
  }
  if (den != 1 || value.IsInteger()) return value.ToString();
  std::string s = value.ToDecimal(std::max(twos, fives));
  return s;
}

std::string EmitTable2(const std::vector<Rational>& alphas, const std::vector<int>& horizons, bool randomized,
                       const SynthesisConfig& base_config) {
  std::ostringstream os;
  os << "alpha,T,kind,ratio_exact,ratio_decimal\n";
  for (const Rational& alpha : alphas) {
    const LocalProblem problem = FileMigration(alpha);
    for (int horizon : horizons) {
      SynthesisConfig config = base_config;
      config.horizon = horizon;
      config.verify_lower_bound.reset();
      auto row = [&](const char* kind, auto synthesize) {
        os << FormatRational(alpha) << ',' << horizon << ',' << kind << ',';
        try {
          SynthesisResult r = synthesize(problem, config);
          os << r.best_ratio.ToString() << ',' << r.best_ratio.ToDecimal(4) << '\n';
        } catch (const Error& e) {
          if (!e.IsGuard()) throw;
          os << "skipped,skipped\n";
        }
      };
      row("deterministic", SynthesizeDet);
      if (randomized) row("randomized", SynthesizeRand);
    }
  }
  return os.str();
}

}  // namespace tlsynth
