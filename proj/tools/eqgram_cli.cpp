#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "eqgram/harness.hpp"

using namespace eqgram;

int main(int argc, char** argv) {
  CLI::App app{"Substring equations, compressed PILLAR and k-mismatch matching"};
  app.require_subcommand(1);

  RunConfig config;
  bool json = false;
  app.add_option("--seed", config.seed, "RNG seed (default from EQGRAM_SEED)");
  app.add_option("--repetition-factor", config.repetitionFactor, "Sampling rounds per log2 n")->check(CLI::PositiveNumber);
  app.add_option("--recompress-cadence", config.recompressCadence, "Recompress every k-th split")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-expansion", config.maxExpansion, "Expansion length bound")->check(CLI::PositiveNumber);
  app.add_option("--max-merged-pairs", config.maxMergedPairs, "Oracle merge bound")->check(CLI::PositiveNumber);
  app.add_flag("--json", json, "Emit json-lines");

  SolveEqArgs solveArgs;
  auto* solve = app.add_subcommand("solve-eq", "Solve a system of substring equations");
  solve->add_option("equations", solveArgs.equationFile, "Equation file")->required();
  solve->add_option("-o,--out", solveArgs.outGrammarFile, "Write the grammar here");
  solve->add_flag("--check", solveArgs.check, "Compare with the union-find oracle");

  PmArgs pmArgs;
  std::string mode = "report", verify = "kangaroo";
  auto* pm = app.add_subcommand("pm", "Pattern matching with mismatches");
  pm->add_option("pattern", pmArgs.patternFile, "Pattern file (raw bytes)")->required();
  pm->add_option("text", pmArgs.textFile, "Text file (raw bytes)")->required();
  pm->add_option("-k", pmArgs.k, "Mismatch threshold")->required();
  pm->add_option("--mode", mode, "report or decide")->check(CLI::IsMember({"report", "decide"}));
  pm->add_option("--verify", verify, "kangaroo or naive")->check(CLI::IsMember({"kangaroo", "naive"}));
  pm->add_option("--alphabet", pmArgs.alphabet, "Map bytes modulo sigma")->check(CLI::PositiveNumber);

  std::string grammarFile;
  bool expand = false;
  auto* grammar = app.add_subcommand("grammar", "Grammar file tools");
  grammar->require_subcommand(1);
  auto* inspect = grammar->add_subcommand("inspect", "Summarize a grammar file");
  inspect->add_option("file", grammarFile, "Grammar file")->required();
  inspect->add_flag("--expand", expand, "Print the expansions");

  std::string suite;
  SelftestOptions selftestOptions;
  auto* selftest = app.add_subcommand("selftest", "Run property suites");
  selftest->add_option("suite", suite, "solver, pillar, proxy, pipeline or all")->required();
  selftest->add_option("--instances", selftestOptions.instances, "Instances per suite");
  selftest->add_flag("--inject-fault", selftestOptions.injectFault, "Force failures to exercise the dumps");
  selftest->add_option("--dump-dir", selftestOptions.dumpDir, "Directory for counterexample files");

  std::string replayFile;
  auto* replay = app.add_subcommand("replay", "Re-run a counterexample file");
  replay->add_option("file", replayFile, "Counterexample file")->required();

  std::string benchSuite;
  std::uint64_t scale = 1;
  auto* bench = app.add_subcommand("bench", "Benchmark tables");
  bench->add_option("suite", benchSuite, "solver, pillar or pm")->required();
  bench->add_option("--scale", scale, "Size multiplier")->check(CLI::PositiveNumber);

  for (auto* sub : {solve, pm, grammar, inspect, selftest, replay, bench}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  config.outputFormat = json ? OutputFormat::JsonLines : OutputFormat::Text;
  if (*solve) return cmdSolveEq(solveArgs, config, std::cout, std::cerr);
  if (*pm) {
    pmArgs.mode = mode == "decide" ? MatchMode::Decide : MatchMode::Report;
    pmArgs.verify = verify == "naive" ? VerifyMode::Naive : VerifyMode::Kangaroo;
    return cmdPm(pmArgs, config, std::cout, std::cerr);
  }
  if (*inspect) return cmdGrammarInspect(grammarFile, expand, config, std::cout, std::cerr);
  if (*selftest) {
    if (!knownSuite(suite)) {
      std::cerr << "unknown suite " << suite << '\n';
      return kExitUsage;
    }
    return cmdSelftest(suite, config, selftestOptions, std::cout, std::cerr);
  }
  if (*replay) return cmdReplay(replayFile, config, std::cout, std::cerr);
  if (*bench) {
    if (!knownBenchSuite(benchSuite)) {
      std::cerr << "unknown bench suite " << benchSuite << '\n';
      return kExitUsage;
    }
    return cmdBench(benchSuite, config, scale, std::cout, std::cerr);
  }
  return kExitUsage;
}
