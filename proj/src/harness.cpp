#include "eqgram/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "eqgram/formats.hpp"
#include "eqgram/hamming_proxy.hpp"
#include "eqgram/pillar.hpp"
#include "json.hpp"

namespace eqgram {

using json = nlohmann::ordered_json;

void RunConfig::validate() const {
  if (repetitionFactor == 0) throw InputError("repetitionFactor must be positive");
  if (recompressCadence == 0) throw InputError("recompressCadence must be positive");
  if (maxExpansion == 0) throw InputError("maxExpansion must be positive");
  if (maxMergedPairs == 0) throw InputError("maxMergedPairs must be positive");
}

SolverConfig RunConfig::solver() const {
  SolverConfig s;
  s.recompressCadence = recompressCadence;
  s.maxExpansion = maxExpansion;
  return s;
}

MatchConfig RunConfig::match() const {
  MatchConfig c;
  c.repetitionFactor = repetitionFactor;
  c.solver = solver();
  return c;
}

namespace {

double log2n(Index n) { return std::log2(static_cast<double>(std::max<Index>(n, 1))) + 2; }

Bytes randomBytes(std::mt19937_64& rng, Index n, unsigned sigma) {
  Bytes b(n);
  for (auto& c : b) c = static_cast<std::uint8_t>('a' + rng() % sigma);
  return b;
}

Bytes repeatTo(const Bytes& q, Index n, Index shift = 0) {
  Bytes out(n);
  for (Index i = 0; i < n; ++i) out[i] = q[(i + shift) % q.size()];
  return out;
}

void perturb(std::mt19937_64& rng, Bytes& s, Index count, unsigned sigma) {
  for (Index j = 0; j < count; ++j) s[rng() % s.size()] = static_cast<std::uint8_t>('a' + rng() % sigma);
}

Bytes primitiveWord(std::mt19937_64& rng, Index maxLen, unsigned sigma) {
  for (;;) {
    Bytes q = randomBytes(rng, 1 + rng() % maxLen, sigma);
    if (isPrimitive(q)) return q;
  }
}

// Length weighted by the number of (x, y) placements, (n - len + 1)^2.
SubstringEquation uniformEquation(std::mt19937_64& rng, Index n) {
  std::uniform_real_distribution<double> coin(0, 1);
  Index len = 1;
  for (;;) {
    len = 1 + rng() % n;
    double w = static_cast<double>(n - len + 1) / static_cast<double>(n);
    if (coin(rng) < w * w) break;
  }
  Index x = rng() % (n - len + 1), y = rng() % (n - len + 1);
  return {0, x, x + len, 0, y, y + len};
}

std::uint64_t suiteSalt(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

}  // namespace

EquationSystem generateSystem(std::mt19937_64& rng, Index maxN, std::size_t maxEqs) {
  EquationSystem e;
  Index n = 1 + rng() % maxN;
  e.lengths = {n};
  std::size_t b = rng() % (maxEqs + 1);
  for (std::size_t i = 0; i < b; ++i) e.equations.push_back(uniformEquation(rng, n));
  return e;
}

EquationSystem generatePeriodicSystem(std::mt19937_64& rng, Index maxN) {
  EquationSystem e;
  Index n = 2 + rng() % (maxN - 1);
  e.lengths = {n};
  std::size_t periods = 1 + rng() % 3;
  for (std::size_t i = 0; i < periods; ++i) {
    Index p = 1;
    switch (rng() % 3) {
      case 0: p = 1 + rng() % std::min<Index>(20, n - 1); break;
      case 1: p = std::max<Index>(1, n / 3 + rng() % (n / 6 + 1)); break;
      default: p = n - 1 - rng() % std::min<Index>(20, n - 1); break;
    }
    p = std::clamp<Index>(p, 1, n - 1);
    // Whole-string or local period p.
    Index lo = rng() % 2 ? 0 : rng() % (n - p);
    Index hi = rng() % 2 ? n : lo + p + rng() % (n - lo - p + 1);
    if (hi - lo > p) e.equations.push_back({0, lo, hi - p, 0, lo + p, hi});
  }
  std::size_t extra = rng() % 4;
  for (std::size_t i = 0; i < extra; ++i) e.equations.push_back(uniformEquation(rng, n));
  return e;
}

PmInstance generatePlanted(std::mt19937_64& rng, Index maxM, Index maxN, Index maxK) {
  PmInstance in;
  unsigned sigma = 2 + rng() % 3;
  Index m = 1 + rng() % std::min(maxM, maxN);
  Index n = m + rng() % (maxN - m + 1);
  in.k = rng() % (maxK + 1);
  in.p = randomBytes(rng, m, sigma);
  in.t = randomBytes(rng, n, sigma);
  std::size_t plants = rng() % 4;
  for (std::size_t i = 0; i < plants; ++i) {
    Index x = rng() % (n - m + 1);
    std::copy(in.p.begin(), in.p.end(), in.t.begin() + x);
    Index subs = rng() % (in.k + 1);
    for (Index j = 0; j < subs; ++j) in.t[x + rng() % m] = static_cast<std::uint8_t>('a' + rng() % sigma);
  }
  return in;
}

PmInstance generatePeriodicPm(std::mt19937_64& rng) {
  PmInstance in;
  in.k = 1 + rng() % 3;
  Index m = 128 * in.k * (1 + rng() % 3) + rng() % 128;
  Index n = m + rng() % (m / 2 + 1);
  Bytes q = primitiveWord(rng, std::max<Index>(1, m / (128 * in.k)), 3);
  in.p = repeatTo(q, m);
  in.t = repeatTo(q, n, rng() % q.size());
  perturb(rng, in.p, rng() % (2 * in.k), 3);
  perturb(rng, in.t, rng() % (3 * in.k), 3);
  return in;
}

ProgressionInstance generateProgressionInstance(std::mt19937_64& rng) {
  ProgressionInstance in;
  in.d = 1 + rng() % 4;
  unsigned sigma = 2 + rng() % 3;
  in.q = primitiveWord(rng, 4, sigma);
  const Index ql = in.q.size();
  Index m = 8 * in.d * ql + rng() % 200;
  Index n = m + rng() % (m + 1);
  in.a = rng() % ql;
  in.p = repeatTo(in.q, m);
  // T[i] = Q[(i - a) mod |Q|].
  in.t = repeatTo(in.q, n, ql - in.a);
  perturb(rng, in.p, rng() % (in.d + 1), sigma);
  perturb(rng, in.t, rng() % (4 * in.d + 1), sigma);
  return in;
}

std::string toHex(const Bytes& b) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(2 * b.size());
  for (std::uint8_t c : b) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

Bytes fromHex(const std::string& s) {
  if (s.size() % 2) throw InputError("hex string of odd length");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw InputError("invalid hex digit");
  };
  Bytes out(s.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<std::uint8_t>(nibble(s[2 * i]) * 16 + nibble(s[2 * i + 1]));
  return out;
}

namespace {

std::string joinIndices(const std::vector<Index>& v) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
  return out.str();
}

std::vector<Index> splitIndices(const std::string& s) {
  std::istringstream in(s);
  std::vector<Index> out;
  for (Index x; in >> x;) out.push_back(x);
  return out;
}

// Counterexample file: "key value" lines and "begin name" ... "end" blocks.
struct Dump {
  std::map<std::string, std::string> fields;
  std::map<std::string, std::string> blocks;

  std::string str() const {
    std::ostringstream out;
    out << "# eqgram counterexample\n";
    for (const auto& [k, v] : fields) out << k << ' ' << v << '\n';
    for (const auto& [k, v] : blocks) out << "begin " << k << '\n' << v << "end\n";
    return out.str();
  }

  static Dump parse(const std::string& text) {
    Dump d;
    std::istringstream in(text);
    std::string line, block;
    for (std::size_t lineNo = 1; std::getline(in, line); ++lineNo) {
      if (!block.empty()) {
        if (line == "end") {
          block.clear();
        } else {
          d.blocks[block] += line + "\n";
        }
        continue;
      }
      if (line.empty() || line[0] == '#') continue;
      auto sp = line.find(' ');
      std::string key = line.substr(0, sp), value = sp == std::string::npos ? "" : line.substr(sp + 1);
      if (key == "begin") {
        if (value.empty()) throw ParseError(lineNo, "block without a name");
        block = value;
        d.blocks[block];
      } else {
        d.fields[key] = value;
      }
    }
    if (!block.empty()) throw ParseError(0, "unterminated block " + block);
    return d;
  }

  const std::string& at(const std::string& key) const {
    auto it = fields.find(key);
    if (it == fields.end()) throw InputError("counterexample lacks field '" + key + "'");
    return it->second;
  }
  Index num(const std::string& key) const { return std::stoull(at(key)); }
  const std::string& block(const std::string& key) const {
    auto it = blocks.find(key);
    if (it == blocks.end()) throw InputError("counterexample lacks block '" + key + "'");
    return it->second;
  }
};

struct Outcome {
  bool ok = true;
  std::string detail;
};

Outcome verdict(bool ok, bool fault, std::string detail) {
  if (fault) return {false, "injected fault"};
  return {ok, ok ? std::string() : std::move(detail)};
}

void recordConfig(Dump& d, const RunConfig& c) {
  d.fields["seed"] = std::to_string(c.seed);
  d.fields["repetitionFactor"] = std::to_string(c.repetitionFactor);
  d.fields["recompressCadence"] = std::to_string(c.recompressCadence);
  d.fields["maxExpansion"] = std::to_string(c.maxExpansion);
  d.fields["maxMergedPairs"] = std::to_string(c.maxMergedPairs);
}

RunConfig configOf(const Dump& d) {
  RunConfig c;
  c.seed = d.num("seed");
  c.repetitionFactor = d.num("repetitionFactor");
  c.recompressCadence = static_cast<std::uint32_t>(d.num("recompressCadence"));
  c.maxExpansion = d.num("maxExpansion");
  c.maxMergedPairs = d.num("maxMergedPairs");
  return c;
}

// ---- solver ----

struct SolverMeasure {
  bool partitionOk = false;
  double cIter = 0, cSize = 0, cLz = 0;
};

SolverMeasure measureSolver(const EquationSystem& e, const RunConfig& c) {
  SolverMeasure out;
  auto r = solveSystem(e, c.solver());
  out.partitionOk = partitionOf(r.grammar) == oracleUniversalSolution(e, c.maxMergedPairs);
  const double L = log2n(e.total());
  const double b = static_cast<double>(e.equations.size());
  const double iters = static_cast<double>(r.counters.whileIterations);
  out.cIter = b > 0 ? iters / (b * L) : (iters > 0 ? std::numeric_limits<double>::infinity() : 0);
  out.cSize = static_cast<double>(r.grammar.size()) / ((b + 1) * L * L * L);
  out.cLz = static_cast<double>(leafLzSize(r.grammar, c.maxExpansion)) / ((r.updates + 1) * L);
  return out;
}

Outcome solverProperty(const std::string& prop, const SolverMeasure& s, bool fault) {
  if (prop == "partition") return verdict(s.partitionOk, fault, "partition differs from the union-find oracle");
  if (prop == "iterations") return verdict(s.cIter <= 8, fault, "C_iter = " + std::to_string(s.cIter) + " > 8");
  if (prop == "size") return verdict(s.cSize <= 64, fault, "C_size = " + std::to_string(s.cSize) + " > 64");
  if (prop == "lz") return verdict(s.cLz <= 8, fault, "C_lz = " + std::to_string(s.cLz) + " > 8");
  throw InputError("unknown solver property " + prop);
}

Outcome orderProperty(const EquationSystem& a, const EquationSystem& b, const RunConfig& c, bool fault) {
  bool same = partitionOf(solveSystem(a, c.solver()).grammar) == partitionOf(solveSystem(b, c.solver()).grammar);
  return verdict(same, fault, "permuting the equations changed the partition");
}

// ---- pillar ----

struct PillarQuery {
  std::string kind;  // access, lcp, lcs, ipm
  PillarHandle a, b;
  Index i = 0;
};

Outcome pillarCheck(const PillarIndex& c, const PillarIndex& p, const LetterString& e, const PillarQuery& q,
                    bool fault) {
  try {
    if (q.kind == "access") {
      Letter got = c.access(c.whole(0), q.i);
      return verdict(got == e[q.i] && got == p.access(p.whole(0), q.i), fault, "access differs");
    }
    if (q.kind == "lcp") return verdict(c.lcp(q.a, q.b) == p.lcp(q.a, q.b), fault, "lcp differs");
    if (q.kind == "lcs") return verdict(c.lcs(q.a, q.b) == p.lcs(q.a, q.b), fault, "lcs differs");
    if (q.kind == "ipm") {
      auto got = c.ipm(q.a, q.b);
      std::vector<Index> naive;
      for (Index x = 0; x + q.a.len <= q.b.len; ++x)
        if (std::equal(e.begin() + q.a.start, e.begin() + q.a.start + q.a.len, e.begin() + q.b.start + x))
          naive.push_back(x);
      return verdict(got == p.ipm(q.a, q.b) && got.toVector() == naive, fault, "ipm differs");
    }
  } catch (const FingerprintInconsistency& ex) {
    return {false, std::string("fingerprint inconsistency: ") + ex.what()};
  }
  throw InputError("unknown pillar query " + q.kind);
}

PillarQuery randomQuery(std::mt19937_64& rng, Index n, int type) {
  auto frag = [&](Index maxLen) {
    Index len = 1 + rng() % std::min<Index>(n, maxLen);
    return PillarHandle{0, rng() % (n - len + 1), len};
  };
  PillarQuery q;
  switch (type % 4) {
    case 0:
      q.kind = "access";
      q.i = rng() % n;
      break;
    case 1:
    case 2:
      q.kind = type % 4 == 1 ? "lcp" : "lcs";
      q.a = frag(n);
      q.b = frag(n);
      break;
    default: {
      q.kind = "ipm";
      q.a = frag(64);
      Index shift = std::min<Index>(rng() % (q.a.len + 1), q.a.start);
      Index start = q.a.start - shift;
      Index len = std::min<Index>(n - start, q.a.len + rng() % (q.a.len + 1));
      q.b = PillarHandle{0, start, std::max<Index>(len, 1)};
      if (q.b.len < q.a.len) q.a.len = q.b.len;
      break;
    }
  }
  return q;
}

std::string handleText(const PillarHandle& h) { return std::to_string(h.start) + " " + std::to_string(h.len); }

PillarHandle handleOf(const std::string& s) {
  auto v = splitIndices(s);
  if (v.size() != 2) throw InputError("malformed handle");
  return {0, v[0], v[1]};
}

// A solved system whose pseudo-terminals are partly pinned to random bytes.
Xslp pillarGrammar(std::mt19937_64& rng) {
  auto e = generateSystem(rng);
  Xslp g = solveSystem(e).grammar;
  if (rng() % 2) {
    unsigned sigma = 2 + rng() % 3;
    for (SymbolId x : g.pseudoTerminals())
      if (rng() % 2) g.redefine(x, g.fromBytes(randomBytes(rng, g.length(x), sigma)));
  }
  return g.compacted();
}

// ---- proxy ----

struct SInstance {
  Bytes p, t;
  std::vector<Index> s;
};

SInstance randomSInstance(std::mt19937_64& rng, Index maxM) {
  SInstance in;
  Index m = 1 + rng() % maxM;
  Index n = m + rng() % (m + 1);
  unsigned sigma = 2 + rng() % 3;
  in.p = randomBytes(rng, m, sigma);
  in.t = randomBytes(rng, n, sigma);
  if (rng() % 2)
    for (Index i = 0; i < m; ++i)
      if (rng() % 4) in.t[i] = in.p[i];
  in.s = {0, n - m};
  std::size_t extra = rng() % 4;
  for (std::size_t i = 0; i < extra; ++i) in.s.push_back(rng() % (n - m + 1));
  std::sort(in.s.begin(), in.s.end());
  in.s.erase(std::unique(in.s.begin(), in.s.end()), in.s.end());
  return in;
}

struct Cores {
  LetterString p, t, d;
  Bytes alphabet;
};

// P# and T# from the solved system, with D pinned to its characters.
Cores solvedCores(const SInstance& in, const RunConfig& c, bool pinD) {
  auto e = buildEnhanced(in.p, in.t, in.s, in.p.size());
  auto hd = buildEquationSystemHd(in.p.size(), in.t.size(), e);
  Xslp g = solveMulti(hd.system, c.solver()).grammar;
  Cores out;
  out.alphabet = hd.alphabet;
  if (!hd.alphabet.empty()) {
    if (pinD) {
      Index off = 0;
      for (SymbolId leaf : g.leaves(g.starts()[2])) {
        Index len = g.length(leaf);
        g.redefine(leaf, g.fromBytes(Bytes(hd.alphabet.begin() + off, hd.alphabet.begin() + off + len)));
        off += len;
      }
    }
    out.d = g.expand(g.starts()[2]);
  }
  out.t = g.expand(g.starts()[0]);
  out.p = g.expand(g.starts()[1]);
  return out;
}

Outcome proxyLaws(const SInstance& in, bool fault) {
  const Index m = in.p.size(), n = in.t.size();
  auto s = inferenceSummary(m, n, buildEnhanced(in.p, in.t, in.s, m));
  auto o = inferenceGraphOracle(in.p, in.t, in.s);
  bool ok = o.components == s.g;
  for (Index i = 0; ok && i < m; ++i) ok = o.red[o.component[i]] == (s.redResidues.count(i % s.g) > 0);
  for (Index j = 0; ok && j < n; ++j) ok = o.component[m + j] == o.component[j % s.g];
  return verdict(ok, fault, "residue summary differs from the explicit inference graph");
}

Outcome proxyCores(const SInstance& in, const RunConfig& c, bool fault) {
  Cores got = solvedCores(in, c, false);
  auto [ps, ts] = oracleSCores(in.p, in.t, in.s);
  LetterString lhs = got.t, rhs = ts;
  lhs.insert(lhs.end(), got.p.begin(), got.p.end());
  rhs.insert(rhs.end(), ps.begin(), ps.end());
  lhs.insert(lhs.end(), got.d.begin(), got.d.end());
  for (std::uint8_t ch : got.alphabet) rhs.push_back(Letter::byte(ch));
  return verdict(canonicalLabels(lhs) == canonicalLabels(rhs), fault, "solveMulti differs from the S-cores");
}

Outcome proxySubhash(const SInstance& in, const RunConfig& c, bool fault) {
  const Index m = in.p.size(), n = in.t.size();
  Cores got = solvedCores(in, c, true);
  LetterString all = got.p;
  all.insert(all.end(), got.t.begin(), got.t.end());
  Bytes orig = in.p;
  orig.insert(orig.end(), in.t.begin(), in.t.end());
  std::map<Letter, std::uint8_t> seen;
  for (Index i = 0; i < all.size(); ++i) {
    auto [it, fresh] = seen.emplace(all[i], orig[i]);
    if (!fresh && it->second != orig[i]) return verdict(false, fault, "new equality at position " + std::to_string(i));
    if (all[i].isByte() && all[i].value() != orig[i]) return verdict(false, fault, "byte changed");
  }
  Index g = gcdOfSet(in.s);
  if (g == 0) g = m;
  for (Index x = 0; x + m <= n; x += g) {
    std::span<const Letter> w(got.t.data() + x, m);
    auto a = hammingMismatchesCapped(got.p, w, m);
    auto b = hammingMismatchesCapped(in.p, std::span<const std::uint8_t>(in.t.data() + x, m), m);
    bool same = a->size() == b->size();
    for (std::size_t i = 0; same && i < a->size(); ++i)
      same = (*a)[i].position == (*b)[i].position && (*a)[i].patternChar == Letter::byte((*b)[i].patternChar) &&
             (*a)[i].textChar == Letter::byte((*b)[i].textChar);
    if (!same) return verdict(false, fault, "mismatch information differs at x = " + std::to_string(x));
  }
  return verdict(true, fault, "");
}

// Proxy per standard-trick block with Occ_k within C within Occ_10k.
Outcome proxyPlanted(const PmInstance& in, std::uint64_t seed, const RunConfig& c, bool fault) {
  std::mt19937_64 rng(seed);
  const Index m = in.p.size(), n = in.t.size(), k = in.k;
  const Index step = (m + 1) / 2, segLen = 3 * m / 2;
  std::set<Index> found;
  for (Index b = 0; b + m <= n; b += step) {
    Bytes seg(in.t.begin() + b, in.t.begin() + std::min(n, b + segLen));
    auto truth = naiveOccHk(in.p, seg, k);
    std::vector<Index> cand = truth;
    for (Index x : naiveOccHk(in.p, seg, 10 * k))
      if (rng() % 3 == 0) cand.push_back(x);
    auto proxy = buildProxy(in.p, seg, k, CandidateSet::explicitSet(cand), c.solver());
    LetterString ps = proxy.grammar.expand(proxy.pattern()), ts = proxy.grammar.expand(proxy.text());
    if (ps.size() != m || ts.size() != seg.size()) return verdict(false, fault, "proxy lengths differ");
    if (naiveOccHk(ps, ts, k) != truth)
      return verdict(false, fault, "Occ_k differs in the block at " + std::to_string(b));
    for (Index x : truth) {
      auto a = hammingMismatchesCapped(ps, std::span<const Letter>(ts.data() + x, m), m);
      auto o = hammingMismatchesCapped(in.p, std::span<const std::uint8_t>(seg.data() + x, m), m);
      bool same = a->size() == o->size();
      for (std::size_t i = 0; same && i < a->size(); ++i)
        same = (*a)[i].position == (*o)[i].position && (*a)[i].patternChar == Letter::byte((*o)[i].patternChar) &&
               (*a)[i].textChar == Letter::byte((*o)[i].textChar);
      if (!same) return verdict(false, fault, "mismatch information differs at " + std::to_string(b + x));
      found.insert(b + x);
    }
  }
  auto all = naiveOccHk(in.p, in.t, k);
  return verdict(std::vector<Index>(found.begin(), found.end()) == all, fault, "blocks miss an occurrence");
}

// ---- pipeline ----

Outcome pipelineExact(const PmInstance& in, std::uint64_t seed, const RunConfig& c, bool fault) {
  auto truth = naiveOccHk(in.p, in.t, in.k);
  auto cfg = c.match();
  cfg.checkAnalysis = true;
  std::mt19937_64 r1(seed), r2(seed), r3(seed);
  auto kr = matchFull(in.p, in.t, in.k, MatchMode::Report, VerifyMode::Kangaroo, r1, cfg);
  if (kr.occurrences != truth) return verdict(false, fault, "kangaroo report differs from the naive matcher");
  auto nr = matchFull(in.p, in.t, in.k, MatchMode::Report, VerifyMode::Naive, r2, cfg);
  if (nr.occurrences != kr.occurrences) return verdict(false, fault, "proxy verification differs from raw");
  auto dr = matchFull(in.p, in.t, in.k, MatchMode::Decide, VerifyMode::Kangaroo, r3, cfg);
  bool decideOk = truth.empty() ? dr.occurrences.empty()
                                : dr.occurrences.size() == 1 && std::binary_search(truth.begin(), truth.end(),
                                                                                   dr.occurrences[0]);
  return verdict(decideOk, fault, "decide answer inconsistent");
}

Outcome pipelineSound(const PmInstance& in, std::uint64_t seed, const RunConfig& c, bool fault) {
  std::mt19937_64 rng(seed);
  const Index m = in.p.size();
  Bytes seg(in.t.begin(), in.t.begin() + std::min<Index>(in.t.size(), 3 * m / 2));
  auto a = analyzePattern(in.p, in.k);
  if (a.kind == PatternAnalysis::Kind::Naive) return verdict(true, fault, "");
  auto cand = filterCandidates(in.p, seg, in.k, candidatesFromAnalysis(in.p, seg, in.k, a, rng, c.match()));
  for (Index x : cand.toVector())
    if (mismatchCountCapped(in.p, std::span<const std::uint8_t>(seg.data() + x, m), 10 * in.k) > 10 * in.k)
      return verdict(false, fault, "candidate " + std::to_string(x) + " beyond distance 10k");
  for (Index x : naiveOccHk(in.p, seg, in.k))
    if (!cand.contains(x)) return verdict(false, fault, "occurrence " + std::to_string(x) + " missing");
  return verdict(true, fault, "");
}

Outcome pipelinePeriodic(const PmInstance& in, std::uint64_t seed, const RunConfig& c, bool fault,
                         bool* progression) {
  std::mt19937_64 rng(seed);
  auto r = matchFull(in.p, in.t, in.k, MatchMode::Report, VerifyMode::Kangaroo, rng, c.match());
  if (progression) *progression = r.counters.progressionBlocks > 0;
  return verdict(r.occurrences == naiveOccHk(in.p, in.t, in.k), fault, "periodic instance differs from naive");
}

Outcome progressionLaw(const ProgressionInstance& in, bool fault) {
  const Index m = in.p.size(), n = in.t.size(), ql = in.q.size();
  std::vector<Index> expected;
  for (Index x = in.a; x + m <= n; x += ql) expected.push_back(x);
  return verdict(naiveOccHk(in.p, in.t, 5 * in.d) == expected, fault, "Occ_5d is not the progression");
}

Outcome analysisCheck(const Bytes& p, Index k, bool fault) {
  auto why = verifyAnalysis(p, k, analyzePattern(p, k));
  return verdict(!why, fault, why.value_or(""));
}

Bytes structuredPattern(std::mt19937_64& rng, Index m, Index k) {
  Bytes p;
  switch (rng() % 3) {
    case 0:
      p = repeatTo(primitiveWord(rng, 4, 3), m);
      perturb(rng, p, rng() % (10 * k + 1), 3);
      break;
    case 1: {
      p = repeatTo(primitiveWord(rng, 3, 2), m);
      Bytes h = repeatTo(primitiveWord(rng, 3, 4), m / 2);
      std::copy(h.begin(), h.end(), p.begin() + rng() % (m - h.size() + 1));
      perturb(rng, p, rng() % (4 * k + 1), 4);
      break;
    }
    default: {
      p = randomBytes(rng, m, 4);
      Bytes h = repeatTo(primitiveWord(rng, 2, 2), m / 2 + rng() % (m / 2));
      std::copy(h.begin(), h.end(), p.begin() + rng() % (m - h.size() + 1));
      break;
    }
  }
  return p;
}

// ---- suite driver ----

class SuiteRun {
 public:
  SuiteRun(std::string suite, const RunConfig& c, const SelftestOptions& o, std::vector<PropertyResult>& out)
      : suite_(std::move(suite)), config_(c), options_(o), out_(out) {}

  PropertyResult& property(const std::string& name) {
    for (auto& r : out_)
      if (r.suite == suite_ && r.property == name) return r;
    out_.push_back({suite_, name, true, 0, "", {}, std::nullopt});
    return out_.back();
  }

  // Records one instance; dumps the first failure of the property.
  void record(const std::string& name, const Outcome& o, const std::function<void(Dump&)>& fill) {
    auto& r = property(name);
    ++r.instances;
    if (o.ok || !r.pass) return;
    r.pass = false;
    r.detail = o.detail;
    Dump d;
    d.fields["suite"] = suite_;
    d.fields["property"] = name;
    d.fields["fault"] = options_.injectFault ? "1" : "0";
    recordConfig(d, config_);
    fill(d);
    std::string path = options_.dumpDir + "/counterexample-" + suite_ + "-" + name + ".txt";
    try {
      writeFile(path, d.str());
      r.counterexample = path;
    } catch (const InputError& e) {
      r.detail += std::string("; dump failed: ") + e.what();
    }
  }

  void maxConstant(const std::string& prop, const std::string& name, double v) {
    auto& c = property(prop).constants;
    auto it = c.find(name);
    if (it == c.end() || v > it->second) c[name] = v;
  }

  bool fault() const { return options_.injectFault; }
  std::uint64_t count(std::uint64_t dflt) const { return options_.instances ? options_.instances : dflt; }

 private:
  std::string suite_;
  const RunConfig& config_;
  const SelftestOptions& options_;
  std::vector<PropertyResult>& out_;
};

void solverSuite(const RunConfig& c, SuiteRun& run, std::mt19937_64& rng) {
  const std::uint64_t total = run.count(150);
  std::vector<EquationSystem> systems;
  for (std::uint64_t i = 0; i < total; ++i) systems.push_back(generateSystem(rng));
  for (std::uint64_t i = 0; i < std::max<std::uint64_t>(1, total / 5); ++i)
    systems.push_back(generatePeriodicSystem(rng));
  for (const auto& e : systems) {
    auto s = measureSolver(e, c);
    auto fill = [&](Dump& d) { d.blocks["system"] = formatEquations(e); };
    for (const char* prop : {"partition", "iterations", "size", "lz"}) run.record(prop, solverProperty(prop, s, run.fault()), fill);
    run.maxConstant("iterations", "C_iter", s.cIter);
    run.maxConstant("size", "C_size", s.cSize);
    run.maxConstant("lz", "C_lz", s.cLz);
  }
  for (std::uint64_t i = 0; i < std::max<std::uint64_t>(1, total / 10); ++i) {
    for (int perm = 0; perm < 5; ++perm) {
      EquationSystem shuffled = systems[i];
      std::shuffle(shuffled.equations.begin(), shuffled.equations.end(), rng);
      run.record("order", orderProperty(systems[i], shuffled, c, run.fault()), [&](Dump& d) {
        d.blocks["system"] = formatEquations(systems[i]);
        d.blocks["permuted"] = formatEquations(shuffled);
      });
    }
  }
}

void pillarSuite(const RunConfig& c, SuiteRun& run, std::mt19937_64& rng) {
  const std::uint64_t grammars = run.count(20);
  for (std::uint64_t gi = 0; gi < grammars; ++gi) {
    Xslp g = pillarGrammar(rng);
    auto comp = PillarIndex::preprocess(g);
    LetterString e = g.expand(g.starts()[0]);
    auto plain = PillarIndex::plain({e});
    const Index n = e.size();
    for (int qi = 0; qi < 500; ++qi) {
      auto q = randomQuery(rng, n, qi);
      run.record(q.kind, pillarCheck(comp, plain, e, q, run.fault()), [&](Dump& d) {
        d.blocks["grammar"] = formatGrammar(g);
        d.fields["query"] = q.kind;
        d.fields["a"] = handleText(q.a);
        d.fields["b"] = handleText(q.b);
        d.fields["i"] = std::to_string(q.i);
      });
    }
  }
  (void)c;
}

void fillS(Dump& d, const SInstance& in) {
  d.fields["pattern"] = toHex(in.p);
  d.fields["text"] = toHex(in.t);
  d.fields["positions"] = joinIndices(in.s);
}

void fillPm(Dump& d, const PmInstance& in, std::uint64_t seed) {
  d.fields["pattern"] = toHex(in.p);
  d.fields["text"] = toHex(in.t);
  d.fields["k"] = std::to_string(in.k);
  d.fields["instanceSeed"] = std::to_string(seed);
}

void proxySuite(const RunConfig& c, SuiteRun& run, std::mt19937_64& rng) {
  const std::uint64_t total = run.count(200);
  for (std::uint64_t i = 0; i < total; ++i) {
    auto in = randomSInstance(rng, 64);
    auto fill = [&](Dump& d) { fillS(d, in); };
    run.record("inference-graph", proxyLaws(in, run.fault()), fill);
    run.record("s-core", proxyCores(in, c, run.fault()), fill);
    run.record("subhash", proxySubhash(in, c, run.fault()), fill);
  }
  for (std::uint64_t i = 0; i < std::max<std::uint64_t>(1, total / 4); ++i) {
    auto in = generatePlanted(rng);
    std::uint64_t seed = rng();
    run.record("proxy-occurrences", proxyPlanted(in, seed, c, run.fault()), [&](Dump& d) { fillPm(d, in, seed); });
  }
}

void pipelineSuite(const RunConfig& c, SuiteRun& run, std::mt19937_64& rng) {
  const std::uint64_t total = run.count(150);
  for (std::uint64_t i = 0; i < total; ++i) {
    auto in = generatePlanted(rng);
    std::uint64_t seed = rng();
    auto fill = [&](Dump& d) { fillPm(d, in, seed); };
    run.record("exactness", pipelineExact(in, seed, c, run.fault()), fill);
    run.record("candidate-soundness", pipelineSound(in, seed, c, run.fault()), fill);
  }
  std::uint64_t hits = 0, periodic = std::max<std::uint64_t>(1, total / 3);
  for (std::uint64_t i = 0; i < periodic; ++i) {
    auto in = generatePeriodicPm(rng);
    std::uint64_t seed = rng();
    bool prog = false;
    run.record("periodic", pipelinePeriodic(in, seed, c, run.fault(), &prog), [&](Dump& d) { fillPm(d, in, seed); });
    hits += prog;
  }
  run.property("periodic").constants["progressionShare"] = static_cast<double>(hits) / periodic;
  for (std::uint64_t i = 0; i < periodic; ++i) {
    auto in = generateProgressionInstance(rng);
    run.record("progression-law", progressionLaw(in, run.fault()), [&](Dump& d) {
      d.fields["pattern"] = toHex(in.p);
      d.fields["text"] = toHex(in.t);
      d.fields["q"] = toHex(in.q);
      d.fields["d"] = std::to_string(in.d);
      d.fields["a"] = std::to_string(in.a);
    });
  }
  for (std::uint64_t i = 0; i < total; ++i) {
    Index m = 64 + rng() % 400;
    Index k = 1 + rng() % std::max<Index>(1, m / 8);
    Bytes p = i % 2 ? structuredPattern(rng, m, k) : randomBytes(rng, m, 2 + rng() % 3);
    run.record("analysis", analysisCheck(p, k, run.fault()), [&](Dump& d) {
      d.fields["pattern"] = toHex(p);
      d.fields["k"] = std::to_string(k);
    });
  }
}

const std::vector<std::string>& suiteNames() {
  static const std::vector<std::string> names{"solver", "pillar", "proxy", "pipeline"};
  return names;
}

std::string fmtDouble(double v) {
  std::ostringstream s;
  s << std::setprecision(4) << v;
  return s.str();
}

}  // namespace

bool knownSuite(const std::string& suite) {
  return suite == "all" || std::count(suiteNames().begin(), suiteNames().end(), suite) > 0;
}

std::vector<PropertyResult> runSelftest(const std::string& suite, const RunConfig& config,
                                        const SelftestOptions& options) {
  if (!knownSuite(suite)) throw InputError("unknown suite " + suite);
  config.validate();
  std::vector<PropertyResult> out;
  for (const auto& name : suiteNames()) {
    if (suite != "all" && suite != name) continue;
    std::mt19937_64 rng(config.seed ^ suiteSalt(name));
    SuiteRun run(name, config, options, out);
    if (name == "solver") solverSuite(config, run, rng);
    if (name == "pillar") pillarSuite(config, run, rng);
    if (name == "proxy") proxySuite(config, run, rng);
    if (name == "pipeline") pipelineSuite(config, run, rng);
  }
  return out;
}

PropertyResult replayCounterexample(const std::string& path) {
  Dump d = Dump::parse(readFile(path));
  PropertyResult r;
  r.suite = d.at("suite");
  r.property = d.at("property");
  r.instances = 1;
  const bool fault = d.at("fault") == "1";
  RunConfig c = configOf(d);
  Outcome o;
  if (r.suite == "solver") {
    auto e = parseEquationsString(d.block("system"));
    if (r.property == "order")
      o = orderProperty(e, parseEquationsString(d.block("permuted")), c, fault);
    else
      o = solverProperty(r.property, measureSolver(e, c), fault);
  } else if (r.suite == "pillar") {
    Xslp g = parseGrammarString(d.block("grammar"));
    auto comp = PillarIndex::preprocess(g);
    LetterString e = g.expand(g.starts()[0]);
    auto plain = PillarIndex::plain({e});
    PillarQuery q{d.at("query"), handleOf(d.at("a")), handleOf(d.at("b")), d.num("i")};
    o = pillarCheck(comp, plain, e, q, fault);
  } else if (r.suite == "proxy" && r.property == "proxy-occurrences") {
    PmInstance in{fromHex(d.at("pattern")), fromHex(d.at("text")), d.num("k")};
    o = proxyPlanted(in, d.num("instanceSeed"), c, fault);
  } else if (r.suite == "proxy") {
    SInstance in{fromHex(d.at("pattern")), fromHex(d.at("text")), splitIndices(d.at("positions"))};
    if (r.property == "inference-graph") o = proxyLaws(in, fault);
    else if (r.property == "s-core") o = proxyCores(in, c, fault);
    else if (r.property == "subhash") o = proxySubhash(in, c, fault);
    else throw InputError("unknown proxy property " + r.property);
  } else if (r.suite == "pipeline") {
    if (r.property == "analysis") {
      o = analysisCheck(fromHex(d.at("pattern")), d.num("k"), fault);
    } else if (r.property == "progression-law") {
      ProgressionInstance in{fromHex(d.at("pattern")), fromHex(d.at("text")), fromHex(d.at("q")), d.num("d"),
                             d.num("a")};
      o = progressionLaw(in, fault);
    } else {
      PmInstance in{fromHex(d.at("pattern")), fromHex(d.at("text")), d.num("k")};
      std::uint64_t seed = d.num("instanceSeed");
      if (r.property == "exactness") o = pipelineExact(in, seed, c, fault);
      else if (r.property == "candidate-soundness") o = pipelineSound(in, seed, c, fault);
      else if (r.property == "periodic") o = pipelinePeriodic(in, seed, c, fault, nullptr);
      else throw InputError("unknown pipeline property " + r.property);
    }
  } else {
    throw InputError("unknown suite " + r.suite);
  }
  r.pass = o.ok;
  r.detail = o.detail;
  return r;
}

void printResults(std::ostream& out, const std::vector<PropertyResult>& results, OutputFormat format) {
  for (const auto& r : results) {
    if (format == OutputFormat::JsonLines) {
      json j{{"suite", r.suite}, {"property", r.property}, {"pass", r.pass}, {"instances", r.instances}};
      if (!r.detail.empty()) j["detail"] = r.detail;
      if (!r.constants.empty()) j["constants"] = r.constants;
      if (r.counterexample) j["counterexample"] = *r.counterexample;
      out << j.dump() << '\n';
      continue;
    }
    out << (r.pass ? "PASS " : "FAIL ") << r.suite << '/' << r.property << " instances=" << r.instances;
    for (const auto& [k, v] : r.constants) out << ' ' << k << '=' << fmtDouble(v);
    if (!r.detail.empty()) out << " detail=\"" << r.detail << '"';
    if (r.counterexample) out << " counterexample=" << *r.counterexample;
    out << '\n';
  }
}

std::vector<TrendRow> periodicTrend(const RunConfig& config, const std::vector<Index>& ns, Index m, Index k) {
  std::mt19937_64 rng(config.seed);
  const Bytes q = toBytes("abc");
  Bytes p = repeatTo(q, m);
  p[m / 3] = 'c';
  std::vector<TrendRow> rows;
  for (Index n : ns) {
    Bytes t = repeatTo(q, n);
    // A sparse sprinkle of substitutions keeps the text close to Q^*.
    for (Index i = 7; i < n; i += 997) t[i] = 'a';
    for (MatchMode mode : {MatchMode::Report, MatchMode::Decide}) {
      std::mt19937_64 r(rng());
      auto start = std::chrono::steady_clock::now();
      auto rep = matchFull(p, t, k, mode, VerifyMode::Kangaroo, r, config.match());
      std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - start;
      rows.push_back({n, mode, rep.counters, rep.occurrences.size(), dt.count()});
    }
  }
  return rows;
}

double logLogSlope(const std::vector<TrendRow>& rows, MatchMode mode) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows)
    if (r.mode == mode && r.counters.charAccesses > 0)
      pts.push_back({std::log(static_cast<double>(r.n)), std::log(static_cast<double>(r.counters.charAccesses))});
  if (pts.size() < 2) return 0;
  double mx = 0, my = 0;
  for (auto [x, y] : pts) mx += x, my += y;
  mx /= pts.size(), my /= pts.size();
  double sxy = 0, sxx = 0;
  for (auto [x, y] : pts) sxy += (x - mx) * (y - my), sxx += (x - mx) * (x - mx);
  return sxx > 0 ? sxy / sxx : 0;
}

bool knownBenchSuite(const std::string& suite) { return suite == "solver" || suite == "pillar" || suite == "pm"; }

namespace {

void emitRow(std::ostream& out, OutputFormat f, const json& row, bool& header) {
  if (f == OutputFormat::JsonLines) {
    out << row.dump() << '\n';
    return;
  }
  if (!header) {
    for (auto it = row.begin(); it != row.end(); ++it) out << std::setw(16) << it.key();
    out << '\n';
    header = true;
  }
  for (auto it = row.begin(); it != row.end(); ++it) {
    std::ostringstream cell;
    if (it->is_number_float())
      cell << fmtDouble(it->get<double>());
    else if (it->is_string())
      cell << it->get<std::string>();
    else
      cell << it->dump();
    out << std::setw(16) << cell.str();
  }
  out << '\n';
}

double millisSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void runBench(const std::string& suite, const RunConfig& config, std::ostream& out, std::uint64_t scale) {
  if (!knownBenchSuite(suite)) throw InputError("unknown bench suite " + suite);
  config.validate();
  scale = std::max<std::uint64_t>(scale, 1);
  std::mt19937_64 rng(config.seed ^ suiteSalt("bench-" + suite));
  bool header = false;
  const auto fmt = config.outputFormat;
  if (suite == "solver") {
    for (Index n = 256; n <= 16384 * scale; n *= 2) {
      const std::size_t b = 64;
      double iters = 0, size = 0, lz = 0, ms = 0;
      const int reps = 3;
      for (int r = 0; r < reps; ++r) {
        EquationSystem e;
        e.lengths = {n};
        for (std::size_t i = 0; i < b; ++i) e.equations.push_back(uniformEquation(rng, n));
        auto t0 = std::chrono::steady_clock::now();
        auto res = solveSystem(e, config.solver());
        ms += millisSince(t0);
        iters += res.counters.whileIterations;
        size += res.grammar.size();
        lz += leafLzSize(res.grammar, config.maxExpansion);
      }
      double L = log2n(n);
      emitRow(out, fmt,
              {{"n", n}, {"b", b}, {"whileIterations", iters / reps}, {"C_iter", iters / reps / (b * L)},
               {"grammarSize", size / reps}, {"lzSize", lz / reps}, {"ms", ms / reps}},
              header);
    }
  } else if (suite == "pillar") {
    for (std::uint64_t gi = 0; gi < 4 * scale; ++gi) {
      Xslp g = pillarGrammar(rng);
      LetterString e = g.expand(g.starts()[0]);
      auto comp = PillarIndex::preprocess(g);
      auto plain = PillarIndex::plain({e});
      for (int type = 0; type < 4; ++type) {
        std::vector<PillarQuery> qs;
        for (int i = 0; i < 2000; ++i) qs.push_back(randomQuery(rng, e.size(), type));
        double msC = 0, msP = 0;
        std::uint64_t sink = 0;
        for (const PillarIndex* idx : {&comp, &plain}) {
          auto t0 = std::chrono::steady_clock::now();
          for (const auto& q : qs) {
            if (q.kind == "access") sink += idx->access(idx->whole(0), q.i).offset;
            if (q.kind == "lcp") sink += idx->lcp(q.a, q.b);
            if (q.kind == "lcs") sink += idx->lcs(q.a, q.b);
            if (q.kind == "ipm") sink += idx->ipm(q.a, q.b).count;
          }
          (idx == &comp ? msC : msP) = millisSince(t0);
        }
        emitRow(out, fmt,
                {{"n", e.size()}, {"grammarSize", g.size()}, {"query", qs[0].kind},
                 {"usCompressed", 1000 * msC / qs.size()}, {"usPlain", 1000 * msP / qs.size()},
                 {"checksum", sink % 1000}},
                header);
      }
    }
  } else {
    std::vector<Index> ns;
    for (Index n = 1024; n <= 65536 * scale; n *= 2) ns.push_back(n);
    auto rows = periodicTrend(config, ns, 512, 1);
    for (const auto& r : rows)
      emitRow(out, fmt,
              {{"n", r.n}, {"mode", r.mode == MatchMode::Report ? "report" : "decide"},
               {"charAccesses", r.counters.charAccesses}, {"perN", static_cast<double>(r.counters.charAccesses) / r.n},
               {"pillarOps", r.counters.pillarOps}, {"blocks", r.counters.blocks},
               {"progression", r.counters.progressionBlocks}, {"occurrences", r.occurrences}, {"ms", r.millis}},
              header);
    json slopes{{"slopeReport", logLogSlope(rows, MatchMode::Report)},
                {"slopeDecide", logLogSlope(rows, MatchMode::Decide)}};
    if (fmt == OutputFormat::JsonLines)
      out << slopes.dump() << '\n';
    else
      out << "log-log slope of charAccesses vs n: report=" << fmtDouble(slopes["slopeReport"].get<double>())
          << " decide=" << fmtDouble(slopes["slopeDecide"].get<double>()) << '\n';
  }
}

// ---- commands ----

namespace {

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResourceError& e) {
    err << "resource bound exceeded: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

std::size_t classCount(const std::vector<std::uint32_t>& labels) {
  return labels.empty() ? 0 : 1 + *std::max_element(labels.begin(), labels.end());
}

json countersJson(const Counters& c) {
  return {{"charAccesses", c.charAccesses}, {"pillarOps", c.pillarOps}, {"whileIterations", c.whileIterations},
          {"splits", c.splits},           {"substitutes", c.substitutes}, {"grammarSize", c.grammarSize},
          {"lzSize", c.lzSize}};
}

void printCounters(std::ostream& out, const Counters& c) {
  out << "charAccesses=" << c.charAccesses << " pillarOps=" << c.pillarOps << " whileIterations=" << c.whileIterations
      << " splits=" << c.splits << " substitutes=" << c.substitutes << " grammarSize=" << c.grammarSize
      << " lzSize=" << c.lzSize;
}

}  // namespace

int cmdSolveEq(const SolveEqArgs& args, const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    EquationSystem e = parseEquationsString(readFile(args.equationFile));
    auto r = e.multi ? solveMulti(e, config.solver()) : solveSystem(e, config.solver());
    if (!args.outGrammarFile.empty()) writeFile(args.outGrammarFile, formatGrammar(r.grammar));
    auto labels = partitionOf(r.grammar);
    Counters c;
    c.whileIterations = r.counters.whileIterations;
    c.splits = r.counters.splits;
    c.substitutes = r.counters.substitutes;
    c.grammarSize = r.grammar.size();
    c.lzSize = leafLzSize(r.grammar, config.maxExpansion);
    bool checked = false, agrees = true;
    if (args.check) {
      checked = true;
      agrees = labels == oracleUniversalSolution(e, config.maxMergedPairs);
    }
    if (config.outputFormat == OutputFormat::JsonLines) {
      json j{{"classes", classCount(labels)}, {"length", e.total()}, {"counters", countersJson(c)}};
      if (checked) j["check"] = agrees;
      out << j.dump() << '\n';
    } else {
      out << "classes=" << classCount(labels) << " length=" << e.total() << ' ';
      printCounters(out, c);
      out << '\n';
      if (checked) out << "check: " << (agrees ? "ok" : "MISMATCH") << '\n';
    }
    if (!agrees) err << "partition differs from the union-find oracle\n";
    return agrees ? kExitOk : kExitFailure;
  });
}

int cmdPm(const PmArgs& args, const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    std::string ps = readFile(args.patternFile), ts = readFile(args.textFile);
    Bytes p(ps.begin(), ps.end()), t(ts.begin(), ts.end());
    if (args.alphabet > 0) {
      for (auto& c : p) c = static_cast<std::uint8_t>(c % args.alphabet);
      for (auto& c : t) c = static_cast<std::uint8_t>(c % args.alphabet);
    }
    if (p.empty()) throw InputError("empty pattern");
    if (p.size() > t.size()) throw InputError("pattern longer than text");
    std::mt19937_64 rng(config.seed);
    auto r = matchFull(p, t, args.k, args.mode, args.verify, rng, config.match());
    Counters c;
    c.charAccesses = r.counters.charAccesses;
    c.pillarOps = r.counters.pillarOps;
    c.whileIterations = r.counters.whileIterations;
    c.splits = r.counters.splits;
    c.substitutes = r.counters.substitutes;
    c.grammarSize = r.counters.proxyGrammarSize;
    if (config.outputFormat == OutputFormat::JsonLines) {
      json j{{"mode", args.mode == MatchMode::Report ? "report" : "decide"},
             {"analysis", kindName(r.analysis)},
             {"blocks", r.counters.blocks},
             {"counters", countersJson(c)}};
      if (args.mode == MatchMode::Report)
        j["occurrences"] = r.occurrences;
      else
        j["found"] = !r.occurrences.empty();
      if (args.mode == MatchMode::Decide && !r.occurrences.empty()) j["witness"] = r.occurrences[0];
      out << j.dump() << '\n';
      return kExitOk;
    }
    if (args.mode == MatchMode::Report) {
      out << joinIndices(r.occurrences) << '\n';
    } else if (r.occurrences.empty()) {
      out << "no\n";
    } else {
      out << "yes " << r.occurrences[0] << '\n';
    }
    out << "analysis=" << kindName(r.analysis) << " blocks=" << r.counters.blocks << ' ';
    printCounters(out, c);
    out << '\n';
    return kExitOk;
  });
}

int cmdGrammarInspect(const std::string& file, bool expand, const RunConfig& config, std::ostream& out,
                      std::ostream& err) {
  return guarded(err, [&] {
    Xslp g = parseGrammarString(readFile(file));
    auto pseudo = g.pseudoTerminals();
    Index lz = leafLzSize(g, config.maxExpansion);
    if (config.outputFormat == OutputFormat::JsonLines) {
      json starts = json::array();
      for (SymbolId s : g.starts()) starts.push_back({{"symbol", s}, {"length", g.length(s)}, {"height", g.height(s)}});
      out << json{{"symbols", g.symbolCount()}, {"size", g.size()}, {"pseudoTerminals", pseudo.size()},
                  {"lzSize", lz}, {"starts", starts}}
                 .dump()
          << '\n';
    } else {
      out << "symbols=" << g.symbolCount() << " size=" << g.size() << " pseudoTerminals=" << pseudo.size()
          << " lzSize=" << lz << " starts=" << g.starts().size() << '\n';
      for (std::size_t i = 0; i < g.starts().size(); ++i) {
        SymbolId s = g.starts()[i];
        out << "start " << i << ": symbol=" << s << " length=" << g.length(s) << " height=" << g.height(s) << '\n';
      }
    }
    if (expand) {
      for (SymbolId s : g.starts()) {
        if (g.length(s) > config.maxExpansion) throw ResourceError("expansion longer than maxExpansion");
        LetterString e = g.expand(s);
        for (std::size_t i = 0; i < e.size(); ++i) out << (i ? " " : "") << formatLetter(e[i]);
        out << '\n';
      }
    }
    return kExitOk;
  });
}

int cmdSelftest(const std::string& suite, const RunConfig& config, const SelftestOptions& options, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    auto results = runSelftest(suite, config, options);
    printResults(out, results, config.outputFormat);
    bool ok = std::all_of(results.begin(), results.end(), [](const PropertyResult& r) { return r.pass; });
    return ok ? kExitOk : kExitFailure;
  });
}

int cmdReplay(const std::string& file, const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto r = replayCounterexample(file);
    printResults(out, {r}, config.outputFormat);
    return r.pass ? kExitOk : kExitFailure;
  });
}

int cmdBench(const std::string& suite, const RunConfig& config, std::uint64_t scale, std::ostream& out,
             std::ostream& err) {
  return guarded(err, [&] {
    runBench(suite, config, out, scale);
    return kExitOk;
  });
}

}  // namespace eqgram
