#include <algorithm>
#include <random>

#include "doctest.h"
#include "eqgram/match_pipeline.hpp"

using namespace eqgram;

namespace {

Bytes randomBytes(std::mt19937_64& rng, Index n, int sigma) {
  Bytes b(n);
  for (auto& c : b) c = static_cast<std::uint8_t>('a' + rng() % sigma);
  return b;
}

Bytes repeatTo(const Bytes& q, Index n, Index shift = 0) {
  Bytes out(n);
  for (Index i = 0; i < n; ++i) out[i] = q[(i + shift) % q.size()];
  return out;
}

void plant(std::mt19937_64& rng, const Bytes& p, Bytes& t, Index k, int sigma, std::size_t count) {
  const Index m = p.size();
  for (std::size_t i = 0; i < count; ++i) {
    Index x = rng() % (t.size() - m + 1);
    std::copy(p.begin(), p.end(), t.begin() + x);
    Index subs = rng() % (k + 2);
    for (Index j = 0; j < subs; ++j) t[x + rng() % m] = static_cast<std::uint8_t>('a' + rng() % sigma);
  }
}

void perturb(std::mt19937_64& rng, Bytes& s, Index count, int sigma) {
  for (Index j = 0; j < count; ++j) s[rng() % s.size()] = static_cast<std::uint8_t>('a' + rng() % sigma);
}

}  // namespace

TEST_CASE("analyzePattern examples") {
  auto a = analyzePattern(Bytes(256, 'a'), 2);
  CHECK(a.kind == PatternAnalysis::Kind::Periodic);
  CHECK(a.qLen == 1);

  std::mt19937_64 rng(51);
  Bytes r(1024);
  for (auto& c : r) c = static_cast<std::uint8_t>(rng());
  a = analyzePattern(r, 1);
  CHECK(a.kind == PatternAnalysis::Kind::Breaks);
  CHECK(a.breakLen == 128);
  CHECK(a.breaks.size() == 2);

  a = analyzePattern(repeatTo(toBytes("ab"), 1024), 1);
  CHECK(a.kind == PatternAnalysis::Kind::Periodic);
  CHECK(a.qLen == 2);

  CHECK(analyzePattern(r, 0).kind == PatternAnalysis::Kind::Naive);
  CHECK(analyzePattern(Bytes(40, 'a'), 1).kind == PatternAnalysis::Kind::Naive);
  CHECK(analyzePattern(Bytes(100, 'a'), 13).kind == PatternAnalysis::Kind::Naive);
}

TEST_CASE("analysis witnesses pass re-verification") {
  std::mt19937_64 rng(52);
  int kinds[4] = {0, 0, 0, 0};
  for (int rep = 0; rep < 600; ++rep) {
    Index m = 64 + rng() % 400;
    Index k = 1 + rng() % std::max<Index>(1, m / 8);
    Bytes p;
    switch (rep % 4) {
      case 0: p = randomBytes(rng, m, 2 + rng() % 3); break;
      case 1: {
        p = repeatTo(randomBytes(rng, 1 + rng() % 4, 3), m);
        perturb(rng, p, rng() % (10 * k + 1), 3);
        break;
      }
      case 2: {
        // Periodic halves with different periods.
        p = repeatTo(randomBytes(rng, 1 + rng() % 3, 2), m);
        Bytes h = repeatTo(randomBytes(rng, 1 + rng() % 3, 4), m / 2);
        std::copy(h.begin(), h.end(), p.begin() + rng() % (m - h.size() + 1));
        perturb(rng, p, rng() % (4 * k + 1), 4);
        break;
      }
      default: {
        p = randomBytes(rng, m, 4);
        Bytes h = repeatTo(randomBytes(rng, 1 + rng() % 2, 2), m / 2 + rng() % (m / 2));
        std::copy(h.begin(), h.end(), p.begin() + rng() % (m - h.size() + 1));
        break;
      }
    }
    auto a = analyzePattern(p, k);
    ++kinds[static_cast<int>(a.kind)];
    auto why = verifyAnalysis(p, k, a);
    CHECK_MESSAGE(!why.has_value(), why.value_or(""));
  }
  CHECK(kinds[1] > 0);
  CHECK(kinds[2] > 0);
  CHECK(kinds[3] > 0);
}

TEST_CASE("filterCandidates") {
  Bytes p = toBytes("aaaa"), t = toBytes("aaaabbbbaaab");
  auto c = filterCandidates(p, t, 0, CandidateSet::explicitSet({0, 4, 8}));
  CHECK(c.positions == std::vector<Index>{0});
  Bytes p2(20, 'a'), t2(40, 'a');
  for (Index i = 20; i < 31; ++i) t2[i] = 'b';
  c = filterCandidates(p2, t2, 1, CandidateSet::explicitSet({0, 11, 20}));
  CHECK(c.positions == std::vector<Index>{0});
  t2[30] = 'a';
  c = filterCandidates(p2, t2, 1, CandidateSet::explicitSet({0, 11, 20}));
  CHECK(c.positions == std::vector<Index>{0, 11, 20});
  auto ap = CandidateSet::ofProgression({0, 2, 3});
  CHECK(filterCandidates(p2, t2, 1, ap).progression == ap.progression);
}

TEST_CASE("matchBlock and matchFull examples") {
  std::mt19937_64 rng(53);
  Bytes p = randomBytes(rng, 100, 3);
  auto r = matchBlock(p, p, 0, MatchMode::Report, VerifyMode::Kangaroo, rng);
  CHECK(r.occurrences == std::vector<Index>{0});

  Bytes t = p;
  t.insert(t.end(), p.begin(), p.end());
  t.insert(t.end(), p.begin(), p.end());
  r = matchFull(p, t, 0, MatchMode::Report, VerifyMode::Kangaroo, rng);
  CHECK(r.occurrences == std::vector<Index>{0, 100, 200});

  Bytes small = toBytes("ab"), tt = toBytes("abab");
  CHECK(matchFull(small, tt, 0, MatchMode::Report, VerifyMode::Kangaroo, rng).occurrences ==
        std::vector<Index>{0, 2});
  CHECK(matchFull(small, tt, 2, MatchMode::Report, VerifyMode::Kangaroo, rng).occurrences ==
        std::vector<Index>{0, 1, 2});
  Bytes miss(300, 'c');
  CHECK(matchFull(p, miss, 3, MatchMode::Decide, VerifyMode::Kangaroo, rng).occurrences.empty());
  CHECK_THROWS_AS(matchFull(t, p, 0, MatchMode::Report, VerifyMode::Kangaroo, rng), InputError);

  MatchConfig cfg;
  cfg.mismatchInfo = true;
  Bytes t2 = p;
  t2[5] = t2[5] == 'a' ? 'b' : 'a';
  r = matchFull(p, t2, 2, MatchMode::Report, VerifyMode::Kangaroo, rng, cfg);
  REQUIRE(r.occurrences == std::vector<Index>{0});
  REQUIRE(r.mismatchInfo.size() == 1);
  CHECK(r.mismatchInfo[0].size() == 1);
  CHECK(r.mismatchInfo[0][0].position == 5);
}

TEST_CASE("planted instances agree with the naive matcher") {
  std::mt19937_64 rng(54);
  for (int rep = 0; rep < 400; ++rep) {
    int sigma = 2 + rep % 3;
    Index m = 1 + rng() % 256;
    Index n = m + rng() % (385 - m > 0 ? 385 - m : 1);
    n = std::min<Index>(n, 384);
    n = std::max(n, m);
    Index k = rng() % 17;
    Bytes p = randomBytes(rng, m, sigma), t = randomBytes(rng, n, sigma);
    plant(rng, p, t, k, sigma, rng() % 4);
    auto truth = naiveOccHk(p, t, k);
    MatchConfig cfg;
    cfg.checkAnalysis = true;
    auto kr = matchFull(p, t, k, MatchMode::Report, VerifyMode::Kangaroo, rng, cfg);
    CHECK(kr.occurrences == truth);
    auto nr = matchFull(p, t, k, MatchMode::Report, VerifyMode::Naive, rng, cfg);
    CHECK(nr.occurrences == truth);
    auto dr = matchFull(p, t, k, MatchMode::Decide, VerifyMode::Kangaroo, rng, cfg);
    CHECK(dr.occurrences.size() == (truth.empty() ? 0u : 1u));
    if (!truth.empty() && !dr.occurrences.empty()) CHECK(dr.occurrences[0] == truth[0]);
  }
}

TEST_CASE("periodic instances take the progression branch") {
  std::mt19937_64 rng(55);
  std::uint64_t progression = 0;
  for (int rep = 0; rep < 150; ++rep) {
    Index k = 1 + rng() % 3;
    Index m = 128 * k + rng() % 128;
    Index n = m + rng() % (m / 2 + 1);
    Bytes q;
    do q = randomBytes(rng, 1 + rng() % std::max<Index>(1, m / (128 * k)), 3);
    while (!isPrimitive(q));
    Bytes p = repeatTo(q, m), t = repeatTo(q, n, rng() % q.size());
    perturb(rng, p, rng() % (2 * k), 3);
    perturb(rng, t, rng() % (3 * k), 3);
    auto r = matchFull(p, t, k, MatchMode::Report, VerifyMode::Kangaroo, rng);
    CHECK(r.occurrences == naiveOccHk(p, t, k));
    progression += r.counters.progressionBlocks;
  }
  CHECK(progression > 0);
}
