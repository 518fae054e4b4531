#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "eqgram/grammar.hpp"

namespace eqgram {

// S_i[x..xEnd) = S_j[y..yEnd); i = j = 0 for single-string systems.
struct SubstringEquation {
  std::uint32_t i = 0;
  Index x = 0, xEnd = 0;
  std::uint32_t j = 0;
  Index y = 0, yEnd = 0;
  friend bool operator==(const SubstringEquation&, const SubstringEquation&) = default;
};

struct EquationSystem {
  std::vector<Index> lengths;
  std::vector<SubstringEquation> equations;
  bool multi = false;  // written as "lens ..." rather than "n ..."

  Index total() const;
  std::vector<Index> offsets() const;  // prefix sums, size lengths.size() + 1
  void validate() const;
  friend bool operator==(const EquationSystem&, const EquationSystem&) = default;
};

struct SolverConfig {
  // k > 0: recompress after every Substitute and every k-th Split.
  // 0: adaptive, only when the height or the symbol store degrades.
  std::uint32_t recompressCadence = 1;
  Index maxExpansion = 1'000'000;
};

struct SolverCounters {
  std::uint64_t whileIterations = 0;
  std::uint64_t splits = 0;       // splits that changed the grammar
  std::uint64_t substitutes = 0;
  std::uint64_t recompressions = 0;
  std::uint64_t equations = 0;    // setSubstringsEqual calls
  double potential = 0;           // sum over pseudo-terminals of 1 + log2 |X|
  double initialPotential = 0;
  double potentialAdded = 0;      // by the endpoint splits of setSubstringsEqual
};

struct Location {
  Index delimiter = 0;
  std::optional<SymbolId> pseudoTerminal;
};

class SolverState {
 public:
  explicit SolverState(Index n, SolverConfig config = {});

  Index length() const { return n_; }
  void splitAt(Index x);
  void substitute(SymbolId pseudo, Index x, Index y);
  Location locate(Index x) const;
  Index findDelimiter(Index x) const { return locate(x).delimiter; }
  SymbolId findPseudoTerminal(Index x) const;
  Index lce(Index x, Index y) const;
  void setSubstringsEqual(Index x, Index xEnd, Index y, Index yEnd);

  // Recompressed, compacted copy with the single start S.
  Xslp exportGrammar() const;
  const Xslp& grammar() const { return g_; }
  SymbolId root() const { return root_; }
  const SolverCounters& counters() const { return c_; }
  double potentialFromScratch() const;
  LetterString expansion() const { return g_.expand(root_); }
  // Split and substitute calls that changed the grammar.
  std::uint64_t updates() const { return c_.splits + c_.substitutes; }

 private:
  void afterUpdate(bool substitute);
  void recompressNow();
  static double weight(Index len);

  SolverConfig cfg_;
  Index n_;
  Xslp g_;
  SymbolId root_;
  SolverCounters c_;
  std::uint64_t splitsSinceRecompress_ = 0;
  std::size_t sizeAtRecompress_ = 1;
};

struct SolveResult {
  Xslp grammar;
  SolverCounters counters;
  std::uint64_t updates = 0;
};

// One start per string; grammar expansions form a universal solution.
SolveResult solveSystem(const EquationSystem& e, SolverConfig config = {});
SolveResult solveMulti(const EquationSystem& e, SolverConfig config = {});

// Canonical class labels of all positions (strings concatenated in order).
std::vector<std::uint32_t> oracleUniversalSolution(const EquationSystem& e, Index maxMergedPairs = 1'000'000);

// Canonical labels of the concatenated expansions of the grammar's starts.
std::vector<std::uint32_t> partitionOf(const Xslp& g);

}  // namespace eqgram
