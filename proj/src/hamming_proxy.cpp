#include "eqgram/hamming_proxy.hpp"

#include <algorithm>
#include <numeric>
#include <span>

namespace eqgram {

namespace {

struct UnionFind {
  std::vector<Index> parent;
  explicit UnionFind(Index n) : parent(n) { std::iota(parent.begin(), parent.end(), Index{0}); }
  Index find(Index v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  void unite(Index a, Index b) {
    a = find(a), b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

void checkPositions(const std::vector<Index>& s, Index n, Index m) {
  if (m == 0 || m > n) throw InputError("inference graph: requires 1 <= m <= n");
  for (Index x : s)
    if (x > n - m) throw InputError("inference graph: position out of range");
}

// Component modulus: gcd of the positions, or m when only 0 is present.
Index modulusOf(const std::vector<Index>& s, Index m) {
  Index g = gcdOfSet(s);
  return g == 0 ? m : g;
}

}  // namespace

CandidateSet CandidateSet::explicitSet(std::vector<Index> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  CandidateSet c;
  c.positions = std::move(v);
  return c;
}

CandidateSet CandidateSet::ofProgression(ArithmeticProgression ap) {
  CandidateSet c;
  c.kind = Kind::Progression;
  c.progression = ap;
  return c;
}

bool CandidateSet::empty() const { return size() == 0; }

Index CandidateSet::size() const { return kind == Kind::Explicit ? positions.size() : progression.count; }

Index CandidateSet::min() const {
  if (empty()) throw ContractViolation("candidate set is empty");
  return kind == Kind::Explicit ? positions.front() : progression.start;
}

Index CandidateSet::max() const {
  if (empty()) throw ContractViolation("candidate set is empty");
  return kind == Kind::Explicit ? positions.back() : progression.last();
}

bool CandidateSet::contains(Index x) const {
  if (kind == Kind::Progression) return progression.contains(x);
  return std::binary_search(positions.begin(), positions.end(), x);
}

std::vector<Index> CandidateSet::toVector() const {
  return kind == Kind::Explicit ? positions : progression.toVector();
}

std::vector<Index> reduceCandidatesGcd(const CandidateSet& c, Index n, Index m) {
  if (m > n) throw InputError("reduceCandidatesGcd: m > n");
  Index last = n - m;
  if (!c.contains(0) || !c.contains(last)) throw ContractViolation("reduceCandidatesGcd: C must contain 0 and n-m");
  std::vector<Index> s{0};
  if (last != 0) s.push_back(last);
  Index g = last;
  auto offer = [&](Index x) {
    if (x > last) throw ContractViolation("reduceCandidatesGcd: candidate beyond n-m");
    if (g != 0 && x % g == 0) return;
    if (g == 0 && x == 0) return;
    s.push_back(x);
    g = std::gcd(g, x);
  };
  if (c.kind == CandidateSet::Kind::Progression) {
    // gcd(0, diff, ..., last) = diff, reached by the second member.
    if (c.progression.count >= 2) offer(c.progression.at(1));
  } else {
    for (Index x : c.positions) offer(x);
  }
  return s;
}

std::vector<EnhancedOccurrence> buildEnhanced(const Bytes& p, const Bytes& t, const std::vector<Index>& s, Index cap) {
  const Index m = p.size();
  std::vector<EnhancedOccurrence> out;
  out.reserve(s.size());
  for (Index x : s) {
    if (m > t.size() || x > t.size() - m) throw InputError("buildEnhanced: position out of range");
    std::span<const std::uint8_t> window(t.data() + x, m);
    auto mi = hammingMismatchesCapped(p, window, cap);
    if (!mi) throw ContractViolation("buildEnhanced: candidate exceeds the mismatch cap");
    out.push_back({x, std::move(*mi)});
  }
  return out;
}

InferenceSummary inferenceSummary(Index m, Index n, const std::vector<EnhancedOccurrence>& enhanced) {
  std::vector<Index> pos;
  for (const auto& e : enhanced) pos.push_back(e.position);
  checkPositions(pos, n, m);
  InferenceSummary out;
  out.g = modulusOf(pos, m);
  for (const auto& e : enhanced) {
    for (const auto& mm : e.mi) {
      if (mm.position >= m) throw InputError("inferenceSummary: mismatch position out of range");
      // p_i and t_{x+i} share residue i mod g since g divides x.
      Index r = mm.position % out.g;
      out.redResidues.insert(r);
      out.redCharacters[r].insert(mm.patternChar);
      out.redCharacters[r].insert(mm.textChar);
      for (std::uint8_t ch : {mm.patternChar, mm.textChar})
        if (std::find(out.alphabet.begin(), out.alphabet.end(), ch) == out.alphabet.end()) out.alphabet.push_back(ch);
    }
  }
  return out;
}

InferenceGraphOracle inferenceGraphOracle(const Bytes& p, const Bytes& t, const std::vector<Index>& s) {
  const Index m = p.size(), n = t.size();
  checkPositions(s, n, m);
  UnionFind uf(m + n);
  for (Index x : s)
    for (Index i = 0; i < m; ++i) uf.unite(i, m + x + i);
  InferenceGraphOracle out;
  std::vector<Index> roots(m + n);
  for (Index v = 0; v < m + n; ++v) roots[v] = uf.find(v);
  out.component = canonicalLabels(roots);
  out.components = 1 + *std::max_element(out.component.begin(), out.component.end());
  out.red.assign(out.components, false);
  for (Index x : s)
    for (Index i = 0; i < m; ++i)
      if (p[i] != t[x + i]) out.red[out.component[i]] = true;
  return out;
}

HdSystem buildEquationSystemHd(Index m, Index n, const std::vector<EnhancedOccurrence>& enhanced) {
  std::vector<Index> pos;
  for (const auto& e : enhanced) pos.push_back(e.position);
  checkPositions(pos, n, m);
  HdSystem out;
  auto letterIndex = [&](std::uint8_t ch) {
    auto it = std::find(out.alphabet.begin(), out.alphabet.end(), ch);
    if (it != out.alphabet.end()) return static_cast<Index>(it - out.alphabet.begin());
    out.alphabet.push_back(ch);
    return static_cast<Index>(out.alphabet.size() - 1);
  };
  constexpr std::uint32_t kT = 0, kP = 1, kD = 2;
  auto& eqs = out.system.equations;
  for (const auto& e : enhanced) {
    const Index x = e.position;
    Index y = 0;
    for (const auto& mm : e.mi) {
      Index j = mm.position;
      if (j >= m || j < y) throw InputError("buildEquationSystemHd: malformed mismatch information");
      if (j > y) eqs.push_back({kP, y, j, kT, x + y, x + j});
      Index a = letterIndex(mm.patternChar), b = letterIndex(mm.textChar);
      eqs.push_back({kP, j, j + 1, kD, a, a + 1});
      eqs.push_back({kT, x + j, x + j + 1, kD, b, b + 1});
      y = j + 1;
    }
    if (y < m) eqs.push_back({kP, y, m, kT, x + y, x + m});
  }
  out.system.multi = true;
  out.system.lengths = {n, m};
  if (!out.alphabet.empty()) out.system.lengths.push_back(out.alphabet.size());
  return out;
}

std::pair<LetterString, LetterString> oracleSCores(const Bytes& p, const Bytes& t, const std::vector<Index>& s) {
  const Index m = p.size();
  auto graph = inferenceGraphOracle(p, t, s);
  auto core = [&](const Bytes& str, Index base) {
    LetterString out;
    out.reserve(str.size());
    for (Index i = 0; i < str.size(); ++i) {
      std::uint32_t c = graph.component[base + i];
      out.push_back(graph.red[c] ? Letter::byte(str[i]) : Letter::sentinel(c, 0));
    }
    return out;
  };
  return {core(p, 0), core(t, m)};
}

ProxyOutput buildProxy(const Bytes& p, const Bytes& t, Index k, const CandidateSet& c, const SolverConfig& config) {
  const Index m = p.size(), n = t.size();
  if (m == 0 || m > n) throw InputError("buildProxy: requires 1 <= m <= n");
  ProxyOutput out;
  Xslp& g = out.grammar;
  if (c.empty()) {
    g.starts() = {g.pseudoTerminal(n), g.pseudoTerminal(m)};
    return out;
  }
  const Index lo = c.min(), hi = c.max();
  if (hi > n - m) throw ContractViolation("buildProxy: candidate beyond n-m");
  out.cropStart = lo;
  Bytes cropped(t.begin() + lo, t.begin() + hi + m);
  const Index nc = cropped.size();
  if (nc > 2 * m) throw ContractViolation("buildProxy: cropped text longer than 2m");

  CandidateSet shifted = c;
  if (c.kind == CandidateSet::Kind::Explicit)
    for (Index& x : shifted.positions) x -= lo;
  else
    shifted.progression.start -= lo;

  auto s = reduceCandidatesGcd(shifted, nc, m);
  out.g = gcdOfSet(s);
  out.importantSet = buildEnhanced(p, cropped, s, 10 * k);
  auto hd = buildEquationSystemHd(m, nc, out.importantSet);
  out.alphabet = hd.alphabet;
  auto solved = solveMulti(hd.system, config);
  out.solver = solved.counters;
  Xslp r = std::move(solved.grammar);

  // Pin the pseudo-terminals of D to the actual characters.
  if (!hd.alphabet.empty()) {
    SymbolId d = r.starts()[2];
    Index off = 0;
    for (SymbolId leaf : r.leaves(d)) {
      Index len = r.length(leaf);
      if (!r.isPseudoTerminal(leaf)) throw InternalError("buildProxy: D is not made of pseudo-terminals");
      Bytes chars(hd.alphabet.begin() + off, hd.alphabet.begin() + off + len);
      r.redefine(leaf, r.fromBytes(chars));
      off += len;
    }
  }
  SymbolId text = r.starts()[0];
  if (lo > 0) text = r.concat(r.pseudoTerminal(lo), text);
  if (hi + m < n) text = r.concat(text, r.pseudoTerminal(n - hi - m));
  r.starts()[0] = text;
  g = r.compacted();
  return out;
}

}  // namespace eqgram
