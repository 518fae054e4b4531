#include "eqgram/match_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "eqgram/pillar.hpp"

namespace eqgram {

namespace {

// Byte view that counts every character read.
struct Counted {
  const std::uint8_t* data = nullptr;
  std::size_t n = 0;
  std::uint64_t* reads = nullptr;
  std::size_t size() const { return n; }
  std::uint8_t operator[](std::size_t i) const {
    ++*reads;
    return data[i];
  }
  Counted sub(std::size_t a, std::size_t len) const { return {data + a, len, reads}; }
};

Counted view(const Bytes& b, std::uint64_t* reads) { return {b.data(), b.size(), reads}; }

Index ceilDiv(Index a, Index b) { return (a + b - 1) / b; }

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Index rounds(Index n, Index factor) {
  double lg = std::log2(static_cast<double>(std::max<Index>(n, 2)));
  return std::max<Index>(1, static_cast<Index>(std::ceil(static_cast<double>(factor) * lg)));
}

// Mismatch positions of x against the prefix of q^infinity.
template <Sequence S>
std::vector<Index> periodicMismatches(const S& x, const Bytes& q) {
  std::vector<Index> out;
  for (Index i = 0; i < x.size(); ++i)
    if (x[i] != q[i % q.size()]) out.push_back(i);
  return out;
}

// Text structure around an approximate period of a pattern R, given |Q| <= |R|/8d.
struct PeriodicText {
  bool found = false;
  Index l = 0, r = 0, residue = 0;
  std::vector<Index> textMis;  // mismatches against the periodic reference within [l, r)
};

PeriodicText compStructure(Index mR, const Bytes& q, Index d, Index kk, const Counted& seg) {
  PeriodicText out;
  const Index Q = q.size(), n = seg.size();
  if (n < mR || 4 * d * Q > mR) return out;
  // Vote on the rotation of Q found in each of the 4d blocks of seg[mR - 4dQ..mR).
  std::map<Index, std::pair<Index, Index>> votes;  // rotation -> (count, first block)
  Bytes block(Q);
  for (Index i = 0; i < 4 * d; ++i) {
    Index y = mR - 4 * d * Q + i * Q;
    for (Index j = 0; j < Q; ++j) block[j] = seg[y + j];
    auto a = rotationIndex(block, q);
    if (!a) continue;
    auto [it, fresh] = votes.try_emplace(*a, 0, y);
    ++it->second.first;
  }
  Index a = 0, y = 0, best = 0;
  for (const auto& [rot, cy] : votes)
    if (cy.first > best) best = cy.first, a = rot, y = cy.second;
  if (best + kk < 3 * d || best == 0) return out;

  auto ref = [&](Index j) { return q[(j % Q + 2 * Q - y % Q - a) % Q]; };
  Index budget = d + kk, cnt = 0;
  out.l = 0;
  for (Index j = y; j-- > 0;) {
    if (seg[j] == ref(j)) continue;
    if (++cnt > budget) {
      out.l = j + 1;
      break;
    }
    out.textMis.push_back(j);
  }
  std::reverse(out.textMis.begin(), out.textMis.end());
  cnt = 0;
  out.r = n;
  for (Index j = y; j < n; ++j) {
    if (seg[j] == ref(j)) continue;
    if (++cnt > budget) {
      out.r = j;
      break;
    }
    out.textMis.push_back(j);
  }
  out.residue = (y + a) % Q;
  out.found = true;
  return out;
}

ArithmeticProgression progressionOf(const PeriodicText& s, Index mR, Index Q) {
  if (!s.found || s.r < s.l + mR) return {};
  Index x0 = s.l + (s.residue + Q - s.l % Q) % Q;
  Index lastStart = s.r - mR;
  if (x0 > lastStart) return {};
  return {x0, Q, (lastStart - x0) / Q + 1};
}

// One sampled round of the small candidate set: shifts of text mismatches by a pattern mismatch.
void sampleSmall(const PeriodicText& s, const std::vector<Index>& patMis, Index mR, Index Q, std::mt19937_64& rng,
                 Index offset, std::vector<Index>& out) {
  if (!s.found || patMis.empty() || s.r < s.l + mR) return;
  Index y0 = patMis[rng() % patMis.size()];
  for (Index yt : s.textMis) {
    if (yt < y0) continue;
    Index x = yt - y0;
    if (x >= s.l && x + mR <= s.r && x % Q == s.residue) out.push_back(offset + x);
  }
}

Index kangarooMismatches(const PillarIndex& ix, Index x, Index m, Index k, std::uint64_t& ops) {
  PillarHandle pat = ix.whole(1), txt = ix.whole(0);
  Index pos = 0, mis = 0;
  while (pos < m) {
    pos += ix.lcp(ix.extract(pat, pos, m), ix.extract(txt, x + pos, x + m));
    ++ops;
    if (pos >= m) break;
    ops += 2;
    if (ix.access(pat, pos) == ix.access(txt, x + pos)) throw InternalError("kangaroo: lcp stopped on equal letters");
    if (++mis > k) break;
    ++pos;
  }
  return mis;
}

}  // namespace

std::string kindName(PatternAnalysis::Kind k) {
  switch (k) {
    case PatternAnalysis::Kind::Naive: return "naive";
    case PatternAnalysis::Kind::Breaks: return "breaks";
    case PatternAnalysis::Kind::Regions: return "regions";
    case PatternAnalysis::Kind::Periodic: return "periodic";
  }
  return "?";
}

Bytes approximatePeriod(const Bytes& p, Index qStart, Index qLen, Index rot) {
  if (qLen == 0 || qStart + qLen > p.size()) throw InputError("approximatePeriod: range out of bounds");
  Bytes f(p.begin() + qStart, p.begin() + qStart + qLen);
  return rotate(f, rot % qLen);
}

void MatchCounters::add(const MatchCounters& o) {
  charAccesses += o.charAccesses;
  pillarOps += o.pillarOps;
  blocks += o.blocks;
  candidates += o.candidates;
  progressionBlocks += o.progressionBlocks;
  proxyGrammarSize += o.proxyGrammarSize;
  whileIterations += o.whileIterations;
  splits += o.splits;
  substitutes += o.substitutes;
}

PatternAnalysis analyzePattern(const Bytes& p, Index k) {
  const Index m = p.size();
  PatternAnalysis out;
  if (k == 0 || k >= m || m < 64 || m / (8 * k) < 1) return out;
  const Index L = m / (8 * k);
  out.breakLen = L;
  auto need = [&](Index len) { return ceilDiv(8 * k * len, m); };
  Index j = 0, total = 0;
  while (true) {
    if (j + L > m) throw InternalError("analyzePattern: ran out of pattern");
    std::span<const std::uint8_t> frag(p.data() + j, L);
    Index per = smallestPeriod(frag);
    if (per * 128 * k > m) {
      out.breaks.push_back(j);
      j += L;
      if (out.breaks.size() == 2 * k) {
        out.kind = PatternAnalysis::Kind::Breaks;
        out.regions.clear();
        return out;
      }
      continue;
    }
    // Grow a region with approximate period P[j..j+per) until the budget is met.
    auto refAt = [&](Index s) { return s >= j ? p[j + (s - j) % per] : p[j + (per - (j - s) % per) % per]; };
    Index mis = 0, e = j + L;
    bool closed = false;
    while (e < m) {
      mis += p[e] != refAt(e);
      ++e;
      if (mis == need(e - j)) {
        closed = true;
        break;
      }
    }
    if (closed) {
      out.regions.push_back({j, e - j, per, j, 0});
      total += e - j;
      j = e;
      if (8 * total >= 3 * m) {
        out.kind = PatternAnalysis::Kind::Regions;
        out.breaks.clear();
        return out;
      }
      continue;
    }
    // The region hit the end of P: grow it to the left instead.
    for (Index s = j; s-- > 0;) {
      mis += p[s] != refAt(s);
      if (mis == need(m - s)) {
        out.kind = PatternAnalysis::Kind::Regions;
        out.breaks.clear();
        out.regions = {{s, m - s, per, j, (j - s) % per}};
        return out;
      }
    }
    out.kind = PatternAnalysis::Kind::Periodic;
    out.breaks.clear();
    out.regions.clear();
    out.qStart = j;
    out.qLen = per;
    out.rot = j % per;
    return out;
  }
}

std::optional<std::string> verifyAnalysis(const Bytes& p, Index k, const PatternAnalysis& a) {
  const Index m = p.size();
  using K = PatternAnalysis::Kind;
  bool naive = k == 0 || k >= m || m < 64 || m / (8 * k) < 1;
  if (naive != (a.kind == K::Naive)) return "fallback decision disagrees with the parameters";
  if (naive) return std::nullopt;
  const Index L = m / (8 * k);
  switch (a.kind) {
    case K::Naive: break;
    case K::Breaks: {
      if (a.breaks.size() != 2 * k) return "breaks: need exactly 2k breaks";
      if (a.breakLen != L) return "breaks: wrong length";
      for (std::size_t i = 0; i < a.breaks.size(); ++i) {
        Index b = a.breaks[i];
        if (b + L > m) return "breaks: out of range";
        if (i > 0 && b < a.breaks[i - 1] + L) return "breaks: overlapping or unsorted";
        if (smallestPeriod(std::span<const std::uint8_t>(p.data() + b, L)) * 128 * k <= m) return "breaks: period too small";
      }
      break;
    }
    case K::Regions: {
      Index total = 0, prevEnd = 0;
      for (const auto& r : a.regions) {
        if (r.start < prevEnd || r.start + r.len > m) return "regions: overlapping or out of range";
        prevEnd = r.start + r.len;
        total += r.len;
        if (r.len * 8 * k < m) return "regions: region too short";
        if (r.qLen * 128 * k > m) return "regions: period too long";
        Bytes q = approximatePeriod(p, r.qStart, r.qLen, r.rot);
        if (!isPrimitive(q)) return "regions: period not primitive";
        std::span<const std::uint8_t> reg(p.data() + r.start, r.len);
        if (periodicMismatches(reg, q).size() != ceilDiv(8 * k * r.len, m)) return "regions: wrong mismatch budget";
      }
      if (8 * total < 3 * m) return "regions: total length below 3m/8";
      break;
    }
    case K::Periodic: {
      if (a.qLen * 128 * k > m) return "periodic: period too long";
      Bytes q = approximatePeriod(p, a.qStart, a.qLen, a.rot);
      if (!isPrimitive(q)) return "periodic: period not primitive";
      if (periodicMismatches(p, q).size() >= 8 * k) return "periodic: too many mismatches";
      break;
    }
  }
  return std::nullopt;
}

CandidateSet candidatesFromAnalysis(const Bytes& p, const Bytes& t, Index k, const PatternAnalysis& a,
                                    std::mt19937_64& rng, const MatchConfig& config, MatchCounters* counters) {
  const Index m = p.size(), n = t.size();
  MatchCounters local;
  std::uint64_t* reads = &local.charAccesses;
  Counted P = view(p, reads), T = view(t, reads);
  std::vector<Index> out;
  auto finish = [&](CandidateSet c) {
    if (counters) counters->add(local);
    return c;
  };
  if (m > n) return finish({});
  const Index R = rounds(n, config.repetitionFactor);
  using K = PatternAnalysis::Kind;

  if (a.kind == K::Naive) {
    if (k >= m) {
      for (Index x = 0; x + m <= n; ++x) out.push_back(x);
    } else {
      out = naiveOccHk(P, T, k);
    }
    return finish(CandidateSet::explicitSet(out));
  }

  if (a.kind == K::Breaks) {
    std::vector<std::optional<std::vector<Index>>> memo(a.breaks.size());
    std::size_t distinct = 0;
    for (Index round = 0; round < R && distinct < a.breaks.size(); ++round) {
      std::size_t i = rng() % a.breaks.size();
      if (memo[i]) continue;
      ++distinct;
      Index beta = a.breaks[i];
      memo[i] = exactOccurrences(P.sub(beta, a.breakLen), T);
      for (Index o : *memo[i])
        if (o >= beta && o - beta + m <= n) out.push_back(o - beta);
    }
    return finish(CandidateSet::explicitSet(out));
  }

  if (a.kind == K::Periodic) {
    Bytes q = approximatePeriod(p, a.qStart, a.qLen, a.rot);
    local.charAccesses += q.size();
    auto patMis = periodicMismatches(P, q);
    Index delta = patMis.size();
    Index d = std::max(delta, 2 * k);
    auto st = compStructure(m, q, d, k, T);
    if (delta < 2 * k) return finish(CandidateSet::ofProgression(progressionOf(st, m, q.size())));
    for (Index round = 0; round < R; ++round) sampleSmall(st, patMis, m, q.size(), rng, 0, out);
    return finish(CandidateSet::explicitSet(out));
  }

  // Repetitive regions: sample a region by length, then the standard trick over T.
  struct RegionData {
    bool ready = false;
    Bytes q;
    std::vector<Index> patMis;
    std::vector<std::pair<Index, PeriodicText>> segments;
  };
  std::vector<RegionData> data(a.regions.size());
  std::vector<double> weights;
  for (const auto& r : a.regions) weights.push_back(static_cast<double>(r.len));
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::vector<Index> hits;
  for (Index round = 0; round < R; ++round) {
    std::size_t i = pick(rng);
    const auto& reg = a.regions[i];
    RegionData& rd = data[i];
    const Index len = reg.len;
    if (!rd.ready) {
      rd.ready = true;
      rd.q = approximatePeriod(p, reg.qStart, reg.qLen, reg.rot);
      local.charAccesses += rd.q.size();
      Counted rv = P.sub(reg.start, len);
      rd.patMis = periodicMismatches(rv, rd.q);
      Index d = rd.patMis.size();
      Index kappa = 4 * k * len / m;
      Index step = ceilDiv(len, 2);
      for (Index xi = 0; xi < n; xi += step) {
        Index segLen = std::min(n - xi, step + len - 1);
        if (segLen < len) break;
        rd.segments.push_back({xi, compStructure(len, rd.q, d, kappa, T.sub(xi, segLen))});
      }
    }
    hits.clear();
    for (const auto& [xi, st] : rd.segments) sampleSmall(st, rd.patMis, len, rd.q.size(), rng, xi, hits);
    for (Index x : hits)
      if (x >= reg.start && x - reg.start + m <= n) out.push_back(x - reg.start);
  }
  return finish(CandidateSet::explicitSet(out));
}

CandidateSet filterCandidates(const Bytes& p, const Bytes& t, Index k, const CandidateSet& c, MatchCounters* counters) {
  if (c.kind == CandidateSet::Kind::Progression) return c;
  const Index m = p.size();
  std::uint64_t reads = 0;
  Counted P = view(p, &reads), T = view(t, &reads);
  std::vector<Index> keep;
  for (Index x : c.positions) {
    if (x + m > t.size()) continue;
    if (mismatchCountCapped(P, T.sub(x, m), 10 * k) <= 10 * k) keep.push_back(x);
  }
  if (counters) counters->charAccesses += reads;
  return CandidateSet::explicitSet(std::move(keep));
}

MatchReport matchBlock(const Bytes& p, const Bytes& t, Index k, MatchMode mode, VerifyMode verify,
                       std::mt19937_64& rng, const MatchConfig& config) {
  return matchBlock(p, t, k, analyzePattern(p, k), mode, verify, rng, config);
}

MatchReport matchBlock(const Bytes& p, const Bytes& t, Index k, const PatternAnalysis& a, MatchMode mode,
                       VerifyMode verify, std::mt19937_64& rng, const MatchConfig& config) {
  const Index m = p.size();
  MatchReport rep;
  rep.analysis = a.kind;
  rep.counters.blocks = 1;
  if (m == 0) throw InputError("matchBlock: empty pattern");
  if (m > t.size()) return rep;
  if (config.checkAnalysis)
    if (auto why = verifyAnalysis(p, k, a)) throw InternalError("analysis witness invalid: " + *why);

  CandidateSet c = candidatesFromAnalysis(p, t, k, a, rng, config, &rep.counters);
  c = filterCandidates(p, t, k, c, &rep.counters);
  rep.counters.candidates += c.size();
  if (c.kind == CandidateSet::Kind::Progression) ++rep.counters.progressionBlocks;

  std::uint64_t reads = 0;
  Counted P = view(p, &reads), T = view(t, &reads);
  if (!c.empty()) {
    auto positions = c.toVector();
    if (verify == VerifyMode::Kangaroo) {
      auto proxy = buildProxy(p, t, k, c, config.solver);
      rep.counters.proxyGrammarSize += proxy.grammar.size();
      rep.counters.whileIterations += proxy.solver.whileIterations;
      rep.counters.splits += proxy.solver.splits;
      rep.counters.substitutes += proxy.solver.substitutes;
      auto ix = PillarIndex::preprocess(proxy.grammar);
      for (Index x : positions) {
        if (kangarooMismatches(ix, x, m, k, rep.counters.pillarOps) > k) continue;
        rep.occurrences.push_back(x);
        if (mode == MatchMode::Decide) break;
      }
    } else {
      for (Index x : positions) {
        if (mismatchCountCapped(P, T.sub(x, m), k) > k) continue;
        rep.occurrences.push_back(x);
        if (mode == MatchMode::Decide) break;
      }
    }
  }
  if (config.mismatchInfo)
    for (Index x : rep.occurrences) rep.mismatchInfo.push_back(*hammingMismatchesCapped(P, T.sub(x, m), m));
  rep.counters.charAccesses += reads;
  return rep;
}

MatchReport matchFull(const Bytes& p, const Bytes& t, Index k, MatchMode mode, VerifyMode verify,
                      std::mt19937_64& rng, const MatchConfig& config) {
  const Index m = p.size(), n = t.size();
  if (m == 0) throw InputError("matchFull: empty pattern");
  if (m > n) throw InputError("matchFull: pattern longer than text");
  PatternAnalysis a = analyzePattern(p, k);
  MatchReport out;
  out.analysis = a.kind;
  MatchConfig blockConfig = config;
  blockConfig.mismatchInfo = false;
  const Index step = ceilDiv(m, 2), segLen = 3 * m / 2;
  const std::uint64_t root = rng();
  std::set<Index> all;
  Index idx = 0;
  for (Index b = 0; b + m <= n; b += step, ++idx) {
    Bytes seg(t.begin() + b, t.begin() + std::min(n, b + segLen));
    std::mt19937_64 blockRng(splitmix(root ^ splitmix(idx)));
    auto rep = matchBlock(p, seg, k, a, mode, verify, blockRng, blockConfig);
    out.counters.add(rep.counters);
    for (Index x : rep.occurrences) all.insert(b + x);
    if (mode == MatchMode::Decide && !all.empty()) break;
  }
  out.occurrences.assign(all.begin(), all.end());
  if (mode == MatchMode::Decide && out.occurrences.size() > 1) out.occurrences.resize(1);
  if (config.mismatchInfo) {
    std::uint64_t reads = 0;
    Counted P = view(p, &reads), T = view(t, &reads);
    for (Index x : out.occurrences) out.mismatchInfo.push_back(*hammingMismatchesCapped(P, T.sub(x, m), m));
    out.counters.charAccesses += reads;
  }
  return out;
}

}  // namespace eqgram
