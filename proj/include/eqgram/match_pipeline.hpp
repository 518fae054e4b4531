#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "eqgram/hamming_proxy.hpp"

namespace eqgram {

struct PatternAnalysis {
  enum class Kind { Naive, Breaks, Regions, Periodic };
  struct Region {
    Index start = 0, len = 0, qLen = 0;
    // Q = rotate(P[qStart..qStart+qLen), rot), aligned with the region start.
    Index qStart = 0, rot = 0;
    friend bool operator==(const Region&, const Region&) = default;
  };

  Kind kind = Kind::Naive;
  Index breakLen = 0;
  std::vector<Index> breaks;
  std::vector<Region> regions;
  // Periodic: Q = rotate(P[qStart..qStart+qLen), rot), aligned with P[0].
  Index qStart = 0, qLen = 0, rot = 0;
};

std::string kindName(PatternAnalysis::Kind k);

// Naive when k = 0, k >= m, m < 64 or floor(m/8k) < 1.
PatternAnalysis analyzePattern(const Bytes& p, Index k);

// Recomputes every invariant of the witness; returns the first violation.
std::optional<std::string> verifyAnalysis(const Bytes& p, Index k, const PatternAnalysis& a);

// The approximate period of a region or of the periodic case.
Bytes approximatePeriod(const Bytes& p, Index qStart, Index qLen, Index rot);

enum class MatchMode { Report, Decide };
enum class VerifyMode { Kangaroo, Naive };

struct MatchConfig {
  Index repetitionFactor = 40;  // rounds = ceil(factor * log2 n) for sampled candidates
  bool mismatchInfo = false;
  bool checkAnalysis = false;
  SolverConfig solver{};
};

struct MatchCounters {
  std::uint64_t charAccesses = 0;
  std::uint64_t pillarOps = 0;
  std::uint64_t blocks = 0;
  std::uint64_t candidates = 0;        // after filtering
  std::uint64_t progressionBlocks = 0;
  std::uint64_t proxyGrammarSize = 0;  // summed over blocks
  std::uint64_t whileIterations = 0;
  std::uint64_t splits = 0;
  std::uint64_t substitutes = 0;
  void add(const MatchCounters& o);
};

struct MatchReport {
  std::vector<Index> occurrences;
  std::vector<ByteMismatches> mismatchInfo;  // parallel to occurrences when requested
  MatchCounters counters;
  PatternAnalysis::Kind analysis = PatternAnalysis::Kind::Naive;
};

// Occ_k(P, T) is contained in the result with high probability; n <= 3m/2.
CandidateSet candidatesFromAnalysis(const Bytes& p, const Bytes& t, Index k, const PatternAnalysis& a,
                                    std::mt19937_64& rng, const MatchConfig& config = {},
                                    MatchCounters* counters = nullptr);

// Explicit sets keep the positions within distance 10k; progressions pass unchanged.
CandidateSet filterCandidates(const Bytes& p, const Bytes& t, Index k, const CandidateSet& c,
                              MatchCounters* counters = nullptr);

MatchReport matchBlock(const Bytes& p, const Bytes& t, Index k, MatchMode mode, VerifyMode verify,
                       std::mt19937_64& rng, const MatchConfig& config = {});
MatchReport matchBlock(const Bytes& p, const Bytes& t, Index k, const PatternAnalysis& a, MatchMode mode,
                       VerifyMode verify, std::mt19937_64& rng, const MatchConfig& config = {});

// Blocks of ceil(m/2) starts over segments of at most floor(3m/2) characters.
MatchReport matchFull(const Bytes& p, const Bytes& t, Index k, MatchMode mode, VerifyMode verify,
                      std::mt19937_64& rng, const MatchConfig& config = {});

}  // namespace eqgram
