#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "eqgram/equation_solver.hpp"
#include "eqgram/grammar.hpp"

namespace eqgram {

using ByteMismatches = MismatchInfo<std::uint8_t>;

struct EnhancedOccurrence {
  Index position = 0;
  ByteMismatches mi;  // P against T[position..position+m)
  friend bool operator==(const EnhancedOccurrence&, const EnhancedOccurrence&) = default;
};

struct InferenceSummary {
  Index g = 0;
  std::set<Index> redResidues;
  // Characters seen on mismatches of each red residue class.
  std::map<Index, std::set<std::uint8_t>> redCharacters;
  Bytes alphabet;  // D: distinct mismatch characters by first appearance
};

// Either an explicit sorted position list or an arithmetic progression.
struct CandidateSet {
  enum class Kind { Explicit, Progression };
  Kind kind = Kind::Explicit;
  std::vector<Index> positions;
  ArithmeticProgression progression;

  static CandidateSet explicitSet(std::vector<Index> v);
  static CandidateSet ofProgression(ArithmeticProgression ap);
  bool empty() const;
  Index size() const;
  Index min() const;
  Index max() const;
  bool contains(Index x) const;
  std::vector<Index> toVector() const;
};

struct ProxyOutput {
  Xslp grammar;     // starts: T#, P#, and D when non-empty
  Index g = 0;      // gcd of the shifted candidates, 0 when there are none
  Index cropStart = 0;
  std::vector<EnhancedOccurrence> importantSet;  // positions relative to cropStart
  Bytes alphabet;
  SolverCounters solver;

  SymbolId text() const { return grammar.starts()[0]; }
  SymbolId pattern() const { return grammar.starts()[1]; }
};

// Smallest subset of C keeping gcd, starting from {0, n-m}.
std::vector<Index> reduceCandidatesGcd(const CandidateSet& c, Index n, Index m);

std::vector<EnhancedOccurrence> buildEnhanced(const Bytes& p, const Bytes& t, const std::vector<Index>& s, Index cap);

InferenceSummary inferenceSummary(Index m, Index n, const std::vector<EnhancedOccurrence>& enhanced);

// Explicit union-find over the m + n vertices of the inference graph.
struct InferenceGraphOracle {
  Index components = 0;
  std::vector<std::uint32_t> component;  // per vertex: p_0..p_{m-1}, then t_0..t_{n-1}
  std::vector<bool> red;                 // per component
};
InferenceGraphOracle inferenceGraphOracle(const Bytes& p, const Bytes& t, const std::vector<Index>& s);

struct HdSystem {
  EquationSystem system;  // strings T, P, D (D omitted when empty)
  Bytes alphabet;
};
HdSystem buildEquationSystemHd(Index m, Index n, const std::vector<EnhancedOccurrence>& enhanced);

// S-cores by explicit construction; black components become Sentinel(component, 0).
std::pair<LetterString, LetterString> oracleSCores(const Bytes& p, const Bytes& t, const std::vector<Index>& s);

ProxyOutput buildProxy(const Bytes& p, const Bytes& t, Index k, const CandidateSet& c,
                       const SolverConfig& config = {});

}  // namespace eqgram
