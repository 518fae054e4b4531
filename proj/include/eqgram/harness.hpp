#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "eqgram/equation_solver.hpp"
#include "eqgram/match_pipeline.hpp"

namespace eqgram {

enum class OutputFormat { Text, JsonLines };

struct RunConfig {
  std::uint64_t seed = defaultSeed();
  Index repetitionFactor = 40;
  std::uint32_t recompressCadence = 1;
  Index maxExpansion = 1'000'000;
  Index maxMergedPairs = 1'000'000;
  OutputFormat outputFormat = OutputFormat::Text;

  // Throws InputError unless every numeric field is positive.
  void validate() const;
  SolverConfig solver() const;
  MatchConfig match() const;
};

struct Counters {
  std::uint64_t charAccesses = 0;
  std::uint64_t pillarOps = 0;
  std::uint64_t whileIterations = 0;
  std::uint64_t splits = 0;
  std::uint64_t substitutes = 0;
  std::uint64_t grammarSize = 0;
  std::uint64_t lzSize = 0;
};

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2, kExitResource = 3 };

// Instance generators shared by the self-tests and the benchmarks.
// n uniform in [1, maxN], |E| uniform in [0, maxEqs], each equation uniform
// over the valid triples (length, x, y).
EquationSystem generateSystem(std::mt19937_64& rng, Index maxN = 2000, std::size_t maxEqs = 100);
// Few equations forcing small periods and their interactions.
EquationSystem generatePeriodicSystem(std::mt19937_64& rng, Index maxN = 2000);

struct PmInstance {
  Bytes p, t;
  Index k = 0;
};
// m <= maxM, n <= maxN, k <= maxK, alphabet 2-4, 0-3 planted occurrences.
PmInstance generatePlanted(std::mt19937_64& rng, Index maxM = 256, Index maxN = 384, Index maxK = 16);
// Pattern and text close to the same primitive period, n <= 3m/2.
PmInstance generatePeriodicPm(std::mt19937_64& rng);

// An instance of the periodic alignment law with its parameters.
struct ProgressionInstance {
  Bytes p, t, q;
  Index d = 0, a = 0;
};
ProgressionInstance generateProgressionInstance(std::mt19937_64& rng);

struct PropertyResult {
  std::string suite, property;
  bool pass = true;
  std::uint64_t instances = 0;
  std::string detail;
  std::map<std::string, double> constants;
  std::optional<std::string> counterexample;  // dump path
};

struct SelftestOptions {
  std::uint64_t instances = 0;  // 0: suite defaults
  bool injectFault = false;
  std::string dumpDir = ".";
};

// Suites: solver, pillar, proxy, pipeline, all.
std::vector<PropertyResult> runSelftest(const std::string& suite, const RunConfig& config,
                                        const SelftestOptions& options = {});
bool knownSuite(const std::string& suite);

// Re-evaluates a dumped counterexample; the result fails iff the failure reproduces.
PropertyResult replayCounterexample(const std::string& path);

void printResults(std::ostream& out, const std::vector<PropertyResult>& results, OutputFormat format);

// Benchmark suites: solver, pillar, pm. One row per measurement.
void runBench(const std::string& suite, const RunConfig& config, std::ostream& out, std::uint64_t scale = 1);
bool knownBenchSuite(const std::string& suite);

// matchFull on the periodic family P ~ Q^m, T ~ Q^n for growing n.
struct TrendRow {
  Index n = 0;
  MatchMode mode = MatchMode::Report;
  MatchCounters counters;
  std::size_t occurrences = 0;
  double millis = 0;
};
std::vector<TrendRow> periodicTrend(const RunConfig& config, const std::vector<Index>& ns, Index m, Index k);
// Least-squares slope of log(charAccesses) against log(n) over rows of one mode.
double logLogSlope(const std::vector<TrendRow>& rows, MatchMode mode);

std::string toHex(const Bytes& b);
Bytes fromHex(const std::string& s);

// Command bodies; they print to out/err and return an ExitCode.
struct SolveEqArgs {
  std::string equationFile, outGrammarFile;
  bool check = false;
};
int cmdSolveEq(const SolveEqArgs& args, const RunConfig& config, std::ostream& out, std::ostream& err);

struct PmArgs {
  std::string patternFile, textFile;
  Index k = 0;
  MatchMode mode = MatchMode::Report;
  VerifyMode verify = VerifyMode::Kangaroo;
  unsigned alphabet = 0;  // 0: bytes unchanged
};
int cmdPm(const PmArgs& args, const RunConfig& config, std::ostream& out, std::ostream& err);

int cmdGrammarInspect(const std::string& file, bool expand, const RunConfig& config, std::ostream& out,
                      std::ostream& err);

int cmdSelftest(const std::string& suite, const RunConfig& config, const SelftestOptions& options,
                std::ostream& out, std::ostream& err);

int cmdReplay(const std::string& file, const RunConfig& config, std::ostream& out, std::ostream& err);

int cmdBench(const std::string& suite, const RunConfig& config, std::uint64_t scale, std::ostream& out,
             std::ostream& err);

}  // namespace eqgram
