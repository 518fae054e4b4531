#pragma once

#include <random>

#include "eqgram/grammar.hpp"

namespace testutil {

using namespace eqgram;

// Random xSLP built by random concat/extract/power steps over random leaves.
// The result has a single start whose expansion is at most maxLen.
inline Xslp randomXslp(std::mt19937_64& rng, Index maxLen, int sigma = 3, double pseudoShare = 0.5) {
  Xslp g(rng());
  std::vector<SymbolId> pool;
  int leaves = 2 + static_cast<int>(rng() % 6);
  for (int i = 0; i < leaves; ++i) {
    if (std::uniform_real_distribution<>(0, 1)(rng) < pseudoShare)
      pool.push_back(g.pseudoTerminal(1 + rng() % 5));
    else
      pool.push_back(g.terminal(static_cast<std::uint8_t>('a' + rng() % sigma)));
  }
  int steps = 4 + static_cast<int>(rng() % 24);
  for (int s = 0; s < steps; ++s) {
    SymbolId a = pool[rng() % pool.size()], b = pool[rng() % pool.size()];
    switch (rng() % 4) {
      case 0:
      case 1:
        if (g.length(a) + g.length(b) <= maxLen) pool.push_back(g.concat(a, b));
        break;
      case 2: {
        // Only leaf-aligned cuts are legal.
        auto lv = g.leaves(a);
        if (lv.size() < 2) break;
        std::size_t i = rng() % lv.size(), j = rng() % lv.size();
        if (i > j) std::swap(i, j);
        Index lo = 0;
        for (std::size_t k = 0; k < i; ++k) lo += g.length(lv[k]);
        Index hi = lo;
        for (std::size_t k = i; k <= j; ++k) hi += g.length(lv[k]);
        pool.push_back(g.extract(a, lo, hi));
        break;
      }
      case 3: {
        Index e = 2 + rng() % 4;
        if (g.length(a) * e <= maxLen) pool.push_back(g.power(a, e));
        break;
      }
    }
  }
  SymbolId best = pool[0];
  for (SymbolId s : pool)
    if (g.length(s) > g.length(best)) best = s;
  g.starts() = {best};
  return g;
}

inline LetterString naiveConcat(const LetterString& a, const LetterString& b) {
  LetterString out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace testutil
