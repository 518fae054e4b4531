#include "eqgram/equation_solver.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace eqgram {

Index EquationSystem::total() const { return std::accumulate(lengths.begin(), lengths.end(), Index{0}); }

std::vector<Index> EquationSystem::offsets() const {
  std::vector<Index> off(lengths.size() + 1, 0);
  for (std::size_t i = 0; i < lengths.size(); ++i) off[i + 1] = off[i] + lengths[i];
  return off;
}

void EquationSystem::validate() const {
  if (lengths.empty()) throw InputError("equation system without strings");
  for (Index len : lengths)
    if (len == 0) throw InputError("string lengths must be positive");
  for (std::size_t k = 0; k < equations.size(); ++k) {
    const auto& e = equations[k];
    std::string where = "equation " + std::to_string(k) + ": ";
    if (e.i >= lengths.size() || e.j >= lengths.size()) throw InputError(where + "unknown string id");
    if (e.x >= e.xEnd || e.y >= e.yEnd) throw InputError(where + "empty or reversed range");
    if (e.xEnd - e.x != e.yEnd - e.y) throw InputError(where + "ranges differ in length");
    if (e.xEnd > lengths[e.i] || e.yEnd > lengths[e.j]) throw InputError(where + "range exceeds string length");
  }
}

double SolverState::weight(Index len) { return 1.0 + std::log2(static_cast<double>(len)); }

SolverState::SolverState(Index n, SolverConfig config) : cfg_(config), n_(n) {
  if (n == 0) throw InputError("initState: n must be positive");
  root_ = g_.pseudoTerminal(n);
  g_.starts() = {root_};
  c_.potential = c_.initialPotential = weight(n);
}

Location SolverState::locate(Index x) const {
  if (x > n_) throw InputError("locate: position out of range");
  if (x == n_) return {n_, std::nullopt};
  SymbolId s = g_.resolve(root_);
  Index base = 0;
  while (true) {
    Production p = g_.production(s);
    if (p.kind == Production::Kind::PseudoTerminal) return {base, s};
    if (p.kind == Production::Kind::Terminal) return {base, std::nullopt};
    Index L = g_.length(p.left);
    if (x - base < L) {
      s = g_.resolve(p.left);
    } else {
      base += L;
      s = g_.resolve(p.right);
    }
  }
}

SymbolId SolverState::findPseudoTerminal(Index x) const {
  if (x >= n_) throw InputError("findPseudoTerminal: position out of range");
  auto loc = locate(x);
  if (!loc.pseudoTerminal) throw InternalError("solver grammar contains a terminal");
  return *loc.pseudoTerminal;
}

void SolverState::splitAt(Index x) {
  if (x > n_) throw InputError("splitAt: position out of range");
  Location loc = locate(x);
  if (loc.delimiter == x) return;
  SymbolId X = *loc.pseudoTerminal;
  Index len = g_.length(X), off = x - loc.delimiter;
  SymbolId Y = g_.pseudoTerminal(off);
  SymbolId Z = g_.pseudoTerminal(len - off);
  g_.redefineAsBinary(X, Y, Z);
  c_.potential += weight(off) + weight(len - off) - weight(len);
  ++c_.splits;
  afterUpdate(false);
}

void SolverState::substitute(SymbolId X, Index x, Index y) {
  if (!g_.contains(X) || g_.resolve(X) != X || !g_.isPseudoTerminal(X))
    throw ContractViolation("substitute: not a live pseudo-terminal");
  if (x >= y || y > n_) throw InputError("substitute: invalid range");
  if (findDelimiter(x) != x || findDelimiter(y) != y) throw ContractViolation("substitute: x and y must be delimiters");
  Index len = g_.length(X);
  if (len % (y - x) != 0) throw ContractViolation("substitute: |X| is not a multiple of y - x");
  SymbolId C = g_.extract(root_, x, y);
  Index e = len / (y - x);
  SymbolId replacement = e == 1 ? C : g_.power(C, e);
  g_.redefine(X, replacement);
  c_.potential -= weight(len);
  ++c_.substitutes;
  afterUpdate(true);
}

Index SolverState::lce(Index x, Index y) const {
  if (x > n_ || y > n_) throw InputError("lce: position out of range");
  if (x == y) return n_ - x;
  return g_.lce(root_, x, root_, y, n_ - std::max(x, y));
}

void SolverState::setSubstringsEqual(Index x, Index xe, Index y, Index ye) {
  if (x >= xe || y >= ye || xe - x != ye - y || xe > n_ || ye > n_)
    throw InputError("setSubstringsEqual: malformed ranges");
  ++c_.equations;
  double before = c_.potential;
  splitAt(x);
  splitAt(xe);
  splitAt(y);
  splitAt(ye);
  c_.potentialAdded += c_.potential - before;
  if (x == y) return;

  while (true) {
    Index common = lce(x, y);
    if (common >= xe - x) break;
    ++c_.whileIterations;
    Index ax = x + common, ay = y + common;
    Location lx = locate(ax), ly = locate(ay);
    if (lx.delimiter != ax || ly.delimiter != ay || !lx.pseudoTerminal || !ly.pseudoTerminal)
      throw InternalError("first disagreement is not at pseudo-terminal starts");
    SymbolId X = *lx.pseudoTerminal, Y = *ly.pseudoTerminal;
    if (g_.length(Y) > g_.length(X)) {
      std::swap(X, Y);
      std::swap(ax, ay);
    }
    Index ell = g_.length(X);
    Index r = findDelimiter(ay + ell) - ay;
    SymbolId Yp = findPseudoTerminal(ay + ell - 1);
    if (ell > r && X == Yp) {
      Index e = ell / r;
      splitAt(ax + e * r);
    } else {
      splitAt(ax + r);
    }
    substitute(findPseudoTerminal(ax), ay, ay + r);
  }
}

void SolverState::afterUpdate(bool isSubstitute) {
  if (cfg_.recompressCadence > 0) {
    if (isSubstitute || ++splitsSinceRecompress_ >= cfg_.recompressCadence) recompressNow();
    return;
  }
  double limit = 3.0 * std::log2(static_cast<double>(n_) + 1.0) + 10.0;
  if (g_.height(root_) > limit || g_.symbolCount() > 8 * sizeAtRecompress_ + 4096) recompressNow();
}

void SolverState::recompressNow() {
  g_ = recompress(g_, cfg_.maxExpansion);
  root_ = g_.starts()[0];
  sizeAtRecompress_ = g_.symbolCount();
  splitsSinceRecompress_ = 0;
  ++c_.recompressions;
}

Xslp SolverState::exportGrammar() const { return recompress(g_, cfg_.maxExpansion); }

double SolverState::potentialFromScratch() const {
  double phi = 0;
  for (SymbolId p : g_.pseudoTerminals()) phi += weight(g_.length(p));
  return phi;
}

SolveResult solveSystem(const EquationSystem& e, SolverConfig config) {
  e.validate();
  if (e.lengths.size() != 1) throw InputError("solveSystem expects a single string");
  SolverState s(e.lengths[0], config);
  for (const auto& q : e.equations) s.setSubstringsEqual(q.x, q.xEnd, q.y, q.yEnd);
  return {s.exportGrammar(), s.counters(), s.updates()};
}

SolveResult solveMulti(const EquationSystem& e, SolverConfig config) {
  e.validate();
  auto off = e.offsets();
  SolverState s(off.back(), config);
  for (const auto& q : e.equations)
    s.setSubstringsEqual(off[q.i] + q.x, off[q.i] + q.xEnd, off[q.j] + q.y, off[q.j] + q.yEnd);
  for (std::size_t i = 1; i + 1 < off.size(); ++i) s.splitAt(off[i]);
  Xslp whole = s.exportGrammar();
  SymbolId root = whole.starts()[0];
  std::vector<SymbolId> starts;
  for (std::size_t i = 0; i + 1 < off.size(); ++i) starts.push_back(whole.extract(root, off[i], off[i + 1]));
  whole.starts() = starts;
  return {whole.compacted(), s.counters(), s.updates()};
}

std::vector<std::uint32_t> oracleUniversalSolution(const EquationSystem& e, Index maxMergedPairs) {
  e.validate();
  auto off = e.offsets();
  Index pairs = 0;
  for (const auto& q : e.equations) {
    pairs += q.xEnd - q.x;
    if (pairs > maxMergedPairs) throw ResourceError("oracle: merged pairs exceed the bound");
  }
  std::vector<Index> parent(off.back());
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& q : e.equations)
    for (Index k = 0; k < q.xEnd - q.x; ++k) {
      Index a = find(off[q.i] + q.x + k), b = find(off[q.j] + q.y + k);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  std::vector<Index> roots(parent.size());
  for (Index v = 0; v < parent.size(); ++v) roots[v] = find(v);
  return canonicalLabels(roots);
}

std::vector<std::uint32_t> partitionOf(const Xslp& g) {
  LetterString all;
  for (SymbolId s : g.starts()) {
    auto e = g.expand(s);
    all.insert(all.end(), e.begin(), e.end());
  }
  return canonicalLabels(all);
}

}  // namespace eqgram
