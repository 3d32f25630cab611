#ifndef TLSYNTH_HARNESS_H_
#define TLSYNTH_HARNESS_H_

// Input generators, empirical ratio measurement and table reproduction for
// file-migration style problems over the inputs {"0", "1"} (index 1 = "1").

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tlsynth/policy.h"
#include "tlsynth/problem.h"
#include "tlsynth/rational.h"
#include "tlsynth/synthesis.h"

namespace tlsynth {

struct GeneratorSpec {
  enum class Kind { kBlocks, kAdaptive, kUniform, kFixed };
  Kind kind = Kind::kBlocks;
  int64_t block_length = 1;   // blocks: T_b
  int64_t repetitions = 1;    // blocks, adaptive: L
  int64_t length = 0;         // uniform: n
  Rational p{1, 2};           // uniform: probability of "1"
  uint64_t seed = 0;          // uniform
  int64_t cutoff = 1000;      // adaptive: longest phase
  Sequence fixed;

  // "blocks:T=6,L=50", "adaptive:L=50,cutoff=100", "uniform:n=500,p=1/2,seed=7".
  // Throws Error(kParse).
  static GeneratorSpec Parse(std::string_view text);
  std::string ToString() const;
};

// (1^T_b 0^T_b)^L.
Sequence GenBlocks(int64_t block_length, int64_t repetitions);

struct AdaptiveInput {
  Sequence inputs;
  bool cutoff_hit = false;
};

// Plays against a deterministic algorithm: 1-requests until its next output
// is 1, then 0-requests until it is 0, L times; a phase ends early at the
// cutoff.
AdaptiveInput GenAdaptive(const OnlineAlgorithm& algorithm, int64_t repetitions, int64_t cutoff);

// n independent requests, each "1" with probability p.
Sequence GenUniform(int64_t length, const Rational& p, uint64_t seed);

// An algorithm under measurement. Randomized algorithms draw their coins
// from the per-trial seed.
struct MeasuredAlgorithm {
  std::string name;
  bool randomized = false;
  std::function<Sequence(std::span<const Symbol> x_seq, uint64_t trial_seed)> run;
  // Set for deterministic algorithms; required by the adaptive generator.
  std::shared_ptr<const OnlineAlgorithm> deterministic;
};

MeasuredAlgorithm Measure(std::shared_ptr<const OnlineAlgorithm> algorithm);
MeasuredAlgorithm Measure(RandomizedPolicy policy);
// k drawn uniformly from [1, T] in every trial.
MeasuredAlgorithm MeasureMixedResetting(int horizon);
MeasuredAlgorithm MeasureCoinFlip(const Rational& alpha);

struct Guarantee {
  Rational c;
  Rational d;
};

struct RunRecord {
  std::string generator;
  std::string algorithm;
  int64_t trials = 0;
  int64_t length = 0;          // of the last sequence
  Rational mean_cost;          // over trials
  Rational mean_opt;
  std::string ratio;           // total cost / total OPT, 4 digits, or "∞"
  double mean_ratio = 0;       // mean of per-trial ratios (inf if any is)
  double stderr_ratio = 0;
  std::optional<Guarantee> check;
  int64_t violations = 0;      // trials with cost > c * OPT + d
  bool cutoff_hit = false;
  uint64_t seed = 0;

  static std::string CsvHeader();
  std::string ToCsv() const;
};

// Runs `trials` trials (per-trial seeds from (seed, trial)); OPT is computed
// once per distinct input sequence.
RunRecord MeasureRatio(const MeasuredAlgorithm& algorithm, const LocalProblem& problem,
                       const GeneratorSpec& generator, int64_t trials, uint64_t seed = 0,
                       std::optional<Guarantee> check = std::nullopt);

// "0.1" for decimal-representable values, "p/q" otherwise.
std::string FormatRational(const Rational& value);

// CSV with columns alpha,T,kind,ratio_exact,ratio_decimal over file
// migration. Cells past the search guards read "skipped".
std::string EmitTable2(const std::vector<Rational>& alphas, const std::vector<int>& horizons, bool randomized,
                       const SynthesisConfig& base_config);

}  // namespace tlsynth

#endif  // TLSYNTH_HARNESS_H_
