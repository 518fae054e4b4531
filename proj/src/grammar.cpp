#include "eqgram/grammar.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <map>
#include <unordered_map>

namespace eqgram {

namespace {

constexpr std::uint64_t kP = Xslp::kModulus;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 z = static_cast<unsigned __int128>(a) * b;
  std::uint64_t r = static_cast<std::uint64_t>(z & kP) + static_cast<std::uint64_t>(z >> 61);
  r = (r & kP) + (r >> 61);
  return r >= kP ? r - kP : r;
}

std::uint64_t addmod(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  return r >= kP ? r - kP : r;
}

std::uint64_t submod(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kP - b; }

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// B^len, sum_{t<len} B^t and sum_{t<len} t*B^t.
struct PowerSums {
  std::uint64_t pw = 1, g = 0, h = 0;
};

PowerSums powerSums(std::uint64_t base, Index len) {
  PowerSums x;
  Index l = 0;
  for (int bit = 63 - std::countl_zero(len | 1); bit >= 0; --bit) {
    // Doubling: X_{2l} from X_l.
    PowerSums d;
    d.pw = mulmod(x.pw, x.pw);
    d.g = addmod(x.g, mulmod(x.pw, x.g));
    d.h = addmod(x.h, mulmod(x.pw, addmod(mulmod(l % kP, x.g), x.h)));
    x = d;
    l *= 2;
    if ((len >> bit) & 1) {
      // Append one more letter of weight B^l.
      x.g = addmod(x.g, x.pw);
      x.h = addmod(x.h, mulmod(x.pw, l % kP));
      x.pw = mulmod(x.pw, base);
      l += 1;
    }
  }
  return x;
}

Fingerprint runFp(std::uint64_t base, std::uint64_t tag, Index i, Index len) {
  if (len == 0) return {};
  PowerSums s = powerSums(base, len);
  std::uint64_t c = addmod(tag, (i + len - 1) % kP);
  return {submod(mulmod(c, s.g), s.h), s.pw};
}

}  // namespace

std::uint64_t modMul(std::uint64_t a, std::uint64_t b) { return mulmod(a, b); }
std::uint64_t modAdd(std::uint64_t a, std::uint64_t b) { return addmod(a, b); }
std::uint64_t modSub(std::uint64_t a, std::uint64_t b) { return submod(a, b); }
std::uint64_t modPow(std::uint64_t a, Index e) {
  std::uint64_t r = 1;
  for (; e; e >>= 1, a = mulmod(a, a))
    if (e & 1) r = mulmod(r, a);
  return r;
}

std::uint64_t defaultSeed() {
  if (const char* env = std::getenv("EQGRAM_SEED")) {
    char* end = nullptr;
    std::uint64_t v = std::strtoull(env, &end, 0);
    if (end != env) return v;
  }
  return kDefaultSeed;
}

std::string formatLetter(const Letter& l) {
  switch (l.kind) {
    case Letter::Kind::Byte:
      return std::to_string(l.offset);
    case Letter::Kind::Sentinel:
      return "@" + std::to_string(l.symbol) + "." + std::to_string(l.offset);
    case Letter::Kind::Dollar:
      return "$" + std::to_string(l.symbol);
  }
  return "?";
}

LetterString lettersOf(const Bytes& b) {
  LetterString out;
  out.reserve(b.size());
  for (auto c : b) out.push_back(Letter::byte(c));
  return out;
}

Xslp::Xslp(std::uint64_t seed) : seed_(seed) {
  base_ = splitmix(seed ^ 0x6a09e667f3bcc908ULL) % (kP - 1024) + 512;
}

std::uint64_t Xslp::freshTag() { return splitmix(seed_ ^ (0xa54ff53a5f1d36f1ULL * ++tagCounter_)) % kP; }

std::uint64_t Xslp::letterCode(const Letter& l) const {
  switch (l.kind) {
    case Letter::Kind::Byte:
      return l.offset + 1;
    case Letter::Kind::Sentinel:
      return addmod(splitmix(seed_ + 3ULL * l.symbol + 1) % kP, l.offset % kP);
    case Letter::Kind::Dollar:
      return splitmix(seed_ + 3ULL * l.symbol + 2) % kP;
  }
  return 0;
}

Fingerprint Xslp::combine(const Fingerprint& x, const Fingerprint& y) const {
  return {addmod(mulmod(x.value, y.basePower), y.value), mulmod(x.basePower, y.basePower)};
}

Fingerprint Xslp::runFingerprint(SymbolId a, Index i, Index len) const {
  const Node& n = node(resolve(a));
  if (n.kind != NodeKind::Pseudo) throw ContractViolation("runFingerprint: not a pseudo-terminal");
  return runFp(base_, n.tag, i, len);
}

bool Xslp::valid(const Node& n) const {
  return n.kind == NodeKind::Terminal || n.kind == NodeKind::Pseudo || n.epoch == epoch_;
}

void Xslp::computeCaches(const Node& n) const {
  switch (n.kind) {
    case NodeKind::Terminal:
      n.height = 0;
      n.fp = {letterCode(n.letter), base_};
      break;
    case NodeKind::Pseudo:
      n.height = 0;
      n.fp = runFp(base_, n.tag, 0, n.length);
      break;
    case NodeKind::Binary: {
      const Node& l = nodes_[n.left];
      const Node& r = nodes_[n.right];
      n.height = 1 + std::max(l.height, r.height);
      n.fp = combine(l.fp, r.fp);
      break;
    }
    case NodeKind::Alias: {
      const Node& t = nodes_[n.left];
      n.height = t.height;
      n.fp = t.fp;
      break;
    }
  }
  n.epoch = epoch_;
}

void Xslp::ensureValid(SymbolId a) const {
  if (valid(nodes_[a])) return;
  std::vector<SymbolId> stack{a};
  while (!stack.empty()) {
    const Node& n = nodes_[stack.back()];
    if (valid(n)) {
      stack.pop_back();
      continue;
    }
    bool ready = true;
    if (!valid(nodes_[n.left])) stack.push_back(n.left), ready = false;
    if (n.kind == NodeKind::Binary && !valid(nodes_[n.right])) stack.push_back(n.right), ready = false;
    if (ready) {
      computeCaches(n);
      stack.pop_back();
    }
  }
}

void Xslp::checkSymbol(SymbolId a) const {
  if (a >= nodes_.size()) throw InputError("unknown symbol " + std::to_string(a));
}

SymbolId Xslp::resolve(SymbolId a) const {
  checkSymbol(a);
  while (nodes_[a].kind == NodeKind::Alias) a = nodes_[a].left;
  return a;
}

SymbolId Xslp::addNode(Node n) {
  if (n.kind == NodeKind::Binary) {
    ensureValid(n.left);
    ensureValid(n.right);
    n.length = nodes_[n.left].length + nodes_[n.right].length;
  }
  if (nodes_.size() >= kNoSymbol) throw ResourceError("symbol space exhausted");
  nodes_.push_back(n);
  computeCaches(nodes_.back());
  return static_cast<SymbolId>(nodes_.size() - 1);
}

SymbolId Xslp::newSymbol(const Production& p) {
  Node n;
  switch (p.kind) {
    case Production::Kind::Terminal:
      n.kind = NodeKind::Terminal;
      n.letter = p.letter;
      n.length = 1;
      break;
    case Production::Kind::PseudoTerminal:
      if (p.length == 0) throw InputError("pseudo-terminal length must be positive");
      n.kind = NodeKind::Pseudo;
      n.length = p.length;
      n.tag = freshTag();
      break;
    case Production::Kind::Binary:
      if (p.left >= nodes_.size() || p.right >= nodes_.size()) throw InputError("dangling reference in production");
      return makeBinary(p.left, p.right);
  }
  return addNode(n);
}

SymbolId Xslp::makeBinary(SymbolId l, SymbolId r) {
  Node n;
  n.kind = NodeKind::Binary;
  n.left = l;
  n.right = r;
  return addNode(n);
}

Index Xslp::length(SymbolId a) const {
  checkSymbol(a);
  return nodes_[a].length;
}

std::uint32_t Xslp::height(SymbolId a) const {
  checkSymbol(a);
  ensureValid(a);
  return nodes_[a].height;
}

Fingerprint Xslp::fingerprint(SymbolId a) const {
  checkSymbol(a);
  ensureValid(a);
  return nodes_[a].fp;
}

SymbolId Xslp::rebalance(SymbolId l, SymbolId r) {
  std::uint32_t hl = height(l), hr = height(r);
  if (hl > hr + 1) {
    SymbolId L = resolve(l);
    SymbolId ll = nodes_[L].left, lr = nodes_[L].right;
    if (height(ll) >= height(lr)) return makeBinary(ll, makeBinary(lr, r));
    SymbolId LR = resolve(lr);
    SymbolId a = nodes_[LR].left, b = nodes_[LR].right;
    return makeBinary(makeBinary(ll, a), makeBinary(b, r));
  }
  if (hr > hl + 1) {
    SymbolId R = resolve(r);
    SymbolId rl = nodes_[R].left, rr = nodes_[R].right;
    if (height(rr) >= height(rl)) return makeBinary(makeBinary(l, rl), rr);
    SymbolId RL = resolve(rl);
    SymbolId a = nodes_[RL].left, b = nodes_[RL].right;
    return makeBinary(makeBinary(l, a), makeBinary(b, rr));
  }
  return makeBinary(l, r);
}

SymbolId Xslp::join(SymbolId a, SymbolId b) {
  std::uint32_t ha = height(a), hb = height(b);
  if (ha > hb + 1) {
    SymbolId A = resolve(a);
    SymbolId al = nodes_[A].left, ar = nodes_[A].right;
    return rebalance(al, join(ar, b));
  }
  if (hb > ha + 1) {
    SymbolId B = resolve(b);
    SymbolId bl = nodes_[B].left, br = nodes_[B].right;
    return rebalance(join(a, bl), br);
  }
  return makeBinary(a, b);
}

SymbolId Xslp::concat(SymbolId a, SymbolId b) {
  checkSymbol(a);
  checkSymbol(b);
  ensureValid(a);
  ensureValid(b);
  return join(a, b);
}

SymbolId Xslp::extractRec(SymbolId a, Index i, Index j) {
  a = resolve(a);
  const Node& n = nodes_[a];
  if (i == 0 && j == n.length) return a;
  if (n.kind != NodeKind::Binary) throw ContractViolation("extract: cut inside a pseudo-terminal");
  SymbolId l = n.left, r = n.right;
  Index L = nodes_[l].length;
  if (j <= L) return extractRec(l, i, j);
  if (i >= L) return extractRec(r, i - L, j - L);
  SymbolId left = extractRec(l, i, L);
  SymbolId right = extractRec(r, 0, j - L);
  return join(left, right);
}

SymbolId Xslp::extract(SymbolId a, Index i, Index j) {
  checkSymbol(a);
  if (i >= j || j > nodes_[a].length) throw InputError("extract: invalid range");
  ensureValid(a);
  return extractRec(a, i, j);
}

SymbolId Xslp::power(SymbolId a, Index e) {
  checkSymbol(a);
  if (e == 0) throw InputError("power: exponent must be positive");
  ensureValid(a);
  std::map<Index, SymbolId> memo{{1, a}};
  auto rec = [&](auto&& self, Index k) -> SymbolId {
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    SymbolId lo = self(self, k / 2);
    SymbolId hi = self(self, k - k / 2);
    SymbolId s = join(lo, hi);
    memo[k] = s;
    return s;
  };
  return rec(rec, e);
}

SymbolId Xslp::fromBytes(const Bytes& b) {
  if (b.empty()) throw InputError("fromBytes: empty string");
  auto rec = [&](auto&& self, std::size_t lo, std::size_t hi) -> SymbolId {
    if (hi - lo == 1) return terminal(b[lo]);
    std::size_t mid = lo + (hi - lo) / 2;
    SymbolId l = self(self, lo, mid);
    SymbolId r = self(self, mid, hi);
    return makeBinary(l, r);
  };
  return rec(rec, 0, b.size());
}

Letter Xslp::access(SymbolId a, Index pos) const {
  checkSymbol(a);
  if (pos >= nodes_[a].length) throw InputError("access: position out of range");
  a = resolve(a);
  while (true) {
    const Node& n = nodes_[a];
    switch (n.kind) {
      case NodeKind::Terminal:
        return n.letter;
      case NodeKind::Pseudo:
        return Letter::sentinel(a, pos);
      default: {
        Index L = nodes_[n.left].length;
        if (pos < L) {
          a = resolve(n.left);
        } else {
          pos -= L;
          a = resolve(n.right);
        }
      }
    }
  }
}

Fingerprint Xslp::fragmentRec(SymbolId a, Index i, Index len) const {
  a = resolve(a);
  const Node& n = nodes_[a];
  if (i == 0 && len == n.length) return n.fp;
  if (n.kind == NodeKind::Pseudo) return runFp(base_, n.tag, i, len);
  Index L = nodes_[n.left].length;
  if (i + len <= L) return fragmentRec(n.left, i, len);
  if (i >= L) return fragmentRec(n.right, i - L, len);
  return combine(fragmentRec(n.left, i, L - i), fragmentRec(n.right, 0, len - (L - i)));
}

Fingerprint Xslp::fingerprint(SymbolId a, Index i, Index len) const {
  checkSymbol(a);
  if (i > nodes_[a].length || len > nodes_[a].length - i) throw InputError("fingerprint: range out of bounds");
  if (len == 0) return {};
  ensureValid(a);
  return fragmentRec(a, i, len);
}

Index Xslp::lce(SymbolId a, Index i, SymbolId b, Index j, Index maxLen) const {
  checkSymbol(a);
  checkSymbol(b);
  if (i > length(a) || j > length(b) || maxLen > length(a) - i || maxLen > length(b) - j)
    throw InputError("lce: range out of bounds");
  if (maxLen == 0) return 0;
  if (access(a, i) != access(b, j)) return 0;
  ensureValid(a);
  ensureValid(b);
  auto eq = [&](Index len) { return fragmentRec(a, i, len) == fragmentRec(b, j, len); };
  Index lo = 1, hi = maxLen + 1, step = 1;
  while (lo < maxLen) {
    Index cand = std::min(maxLen, lo + step);
    if (!eq(cand)) {
      hi = cand;
      break;
    }
    lo = cand;
    step *= 2;
  }
  while (hi - lo > 1) {
    Index mid = lo + (hi - lo) / 2;
    (eq(mid) ? lo : hi) = mid;
  }
  if (lo < maxLen && access(a, i + lo) == access(b, j + lo))
    throw FingerprintInconsistency("lce: fingerprint disagreement at an equal boundary");
  return lo;
}

Index Xslp::lcs(SymbolId a, Index i, SymbolId b, Index j, Index maxLen) const {
  checkSymbol(a);
  checkSymbol(b);
  if (i > length(a) || j > length(b) || maxLen > i || maxLen > j) throw InputError("lcs: range out of bounds");
  if (maxLen == 0) return 0;
  if (access(a, i - 1) != access(b, j - 1)) return 0;
  ensureValid(a);
  ensureValid(b);
  auto eq = [&](Index len) { return fragmentRec(a, i - len, len) == fragmentRec(b, j - len, len); };
  Index lo = 1, hi = maxLen + 1, step = 1;
  while (lo < maxLen) {
    Index cand = std::min(maxLen, lo + step);
    if (!eq(cand)) {
      hi = cand;
      break;
    }
    lo = cand;
    step *= 2;
  }
  while (hi - lo > 1) {
    Index mid = lo + (hi - lo) / 2;
    (eq(mid) ? lo : hi) = mid;
  }
  if (lo < maxLen && access(a, i - lo - 1) == access(b, j - lo - 1))
    throw FingerprintInconsistency("lcs: fingerprint disagreement at an equal boundary");
  return lo;
}

LetterString Xslp::expand(SymbolId a) const {
  checkSymbol(a);
  return expand(a, 0, nodes_[a].length);
}

LetterString Xslp::expand(SymbolId a, Index i, Index len) const {
  checkSymbol(a);
  if (i > nodes_[a].length || len > nodes_[a].length - i) throw InputError("expand: range out of bounds");
  LetterString out;
  out.reserve(len);
  struct Item {
    SymbolId s;
    Index i, len;
  };
  std::vector<Item> stack;
  if (len > 0) stack.push_back({a, i, len});
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    SymbolId s = resolve(it.s);
    const Node& n = nodes_[s];
    if (n.kind == NodeKind::Terminal) {
      out.push_back(n.letter);
    } else if (n.kind == NodeKind::Pseudo) {
      for (Index k = 0; k < it.len; ++k) out.push_back(Letter::sentinel(s, it.i + k));
    } else {
      Index L = nodes_[n.left].length;
      if (it.i + it.len > L) {
        Index ri = it.i > L ? it.i - L : 0;
        stack.push_back({n.right, ri, it.i + it.len - L - ri});
      }
      if (it.i < L) stack.push_back({n.left, it.i, std::min(it.len, L - it.i)});
    }
  }
  return out;
}

std::vector<SymbolId> Xslp::leaves(SymbolId a) const {
  checkSymbol(a);
  std::vector<SymbolId> out, stack{a};
  while (!stack.empty()) {
    SymbolId s = resolve(stack.back());
    stack.pop_back();
    const Node& n = nodes_[s];
    if (n.kind == NodeKind::Binary) {
      stack.push_back(n.right);
      stack.push_back(n.left);
    } else {
      out.push_back(s);
    }
  }
  return out;
}

Production Xslp::production(SymbolId a) const {
  const Node& n = nodes_[resolve(a)];
  switch (n.kind) {
    case NodeKind::Terminal:
      return Production::terminal(n.letter);
    case NodeKind::Pseudo:
      return Production::pseudoTerminal(n.length);
    default:
      return Production::binary(n.left, n.right);
  }
}

bool Xslp::isPseudoTerminal(SymbolId a) const { return nodes_[resolve(a)].kind == NodeKind::Pseudo; }
bool Xslp::isTerminal(SymbolId a) const { return nodes_[resolve(a)].kind == NodeKind::Terminal; }

std::size_t Xslp::size(const std::vector<SymbolId>& roots) const {
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<SymbolId> stack;
  std::size_t count = 0;
  for (SymbolId r : roots) stack.push_back(resolve(r));
  while (!stack.empty()) {
    SymbolId s = stack.back();
    stack.pop_back();
    if (seen[s]) continue;
    seen[s] = 1;
    ++count;
    const Node& n = nodes_[s];
    if (n.kind == NodeKind::Binary) {
      stack.push_back(resolve(n.left));
      stack.push_back(resolve(n.right));
    }
  }
  return count;
}

std::size_t Xslp::size() const { return size(starts_); }

std::vector<SymbolId> Xslp::pseudoTerminals() const {
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<SymbolId> stack, out;
  for (SymbolId r : starts_) stack.push_back(resolve(r));
  while (!stack.empty()) {
    SymbolId s = stack.back();
    stack.pop_back();
    if (seen[s]) continue;
    seen[s] = 1;
    const Node& n = nodes_[s];
    if (n.kind == NodeKind::Binary) {
      stack.push_back(resolve(n.left));
      stack.push_back(resolve(n.right));
    } else if (n.kind == NodeKind::Pseudo) {
      out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Xslp::reaches(SymbolId from, SymbolId target) const {
  target = resolve(target);
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<SymbolId> stack{resolve(from)};
  while (!stack.empty()) {
    SymbolId s = stack.back();
    stack.pop_back();
    if (s == target) return true;
    if (seen[s]) continue;
    seen[s] = 1;
    const Node& n = nodes_[s];
    if (n.kind == NodeKind::Binary) {
      stack.push_back(resolve(n.left));
      stack.push_back(resolve(n.right));
    }
  }
  return false;
}

void Xslp::redefine(SymbolId x, SymbolId target) {
  checkSymbol(x);
  checkSymbol(target);
  if (nodes_[x].kind != NodeKind::Pseudo) throw ContractViolation("redefine: not a pseudo-terminal");
  if (nodes_[target].length != nodes_[x].length) throw ContractViolation("redefine: length mismatch");
  SymbolId t = resolve(target);
  if (t == x || reaches(t, x)) throw ContractViolation("redefine: replacement refers to the symbol itself");
  Node& n = nodes_[x];
  if (nodes_[t].kind == NodeKind::Binary) {
    n.kind = NodeKind::Binary;
    n.left = nodes_[t].left;
    n.right = nodes_[t].right;
  } else {
    n.kind = NodeKind::Alias;
    n.left = t;
  }
  ++epoch_;
}

void Xslp::redefineAsBinary(SymbolId x, SymbolId left, SymbolId right) {
  checkSymbol(x);
  checkSymbol(left);
  checkSymbol(right);
  if (nodes_[x].kind != NodeKind::Pseudo) throw ContractViolation("redefine: not a pseudo-terminal");
  if (nodes_[left].length + nodes_[right].length != nodes_[x].length)
    throw ContractViolation("redefine: length mismatch");
  if (resolve(left) == x || resolve(right) == x || reaches(left, x) || reaches(right, x))
    throw ContractViolation("redefine: replacement refers to the symbol itself");
  Node& n = nodes_[x];
  n.kind = NodeKind::Binary;
  n.left = left;
  n.right = right;
  ++epoch_;
}

void Xslp::redefineAsTerminal(SymbolId x, Letter l) {
  checkSymbol(x);
  if (nodes_[x].kind != NodeKind::Pseudo || nodes_[x].length != 1)
    throw ContractViolation("redefineAsTerminal: not a length-1 pseudo-terminal");
  Node& n = nodes_[x];
  n.kind = NodeKind::Terminal;
  n.letter = l;
  computeCaches(n);
  ++epoch_;
}

Xslp Xslp::compacted(std::vector<SymbolId>* remap) const {
  Xslp out(seed_);
  out.tagCounter_ = tagCounter_;
  std::vector<SymbolId> map(nodes_.size(), kNoSymbol);
  std::vector<std::pair<SymbolId, bool>> stack;
  for (SymbolId r : starts_) {
    stack.push_back({resolve(r), false});
    while (!stack.empty()) {
      auto [s, expanded] = stack.back();
      stack.pop_back();
      if (map[s] != kNoSymbol) continue;
      const Node& n = nodes_[s];
      if (n.kind == NodeKind::Binary) {
        SymbolId l = resolve(n.left), rr = resolve(n.right);
        if (!expanded) {
          stack.push_back({s, true});
          stack.push_back({rr, false});
          stack.push_back({l, false});
          continue;
        }
        map[s] = out.makeBinary(map[l], map[rr]);
      } else {
        Node copy;
        copy.kind = n.kind;
        copy.letter = n.letter;
        copy.length = n.length;
        copy.tag = n.tag;
        map[s] = out.addNode(copy);
      }
    }
    out.starts_.push_back(map[resolve(r)]);
  }
  if (remap) {
    for (SymbolId s = 0; s < nodes_.size(); ++s)
      if (map[s] == kNoSymbol) map[s] = map[resolve(s)];
    *remap = std::move(map);
  }
  return out;
}

namespace {

std::vector<SymbolId> leafString(const Xslp& g, Index maxLeaves, std::vector<Index>* boundaries) {
  std::vector<SymbolId> seq;
  if (boundaries) boundaries->assign(1, 0);
  for (SymbolId s : g.starts()) {
    auto lv = g.leaves(s);
    if (seq.size() + lv.size() > maxLeaves)
      throw ResourceError("leaf string exceeds the bound of " + std::to_string(maxLeaves));
    seq.insert(seq.end(), lv.begin(), lv.end());
    if (boundaries) boundaries->push_back(seq.size());
  }
  return seq;
}

std::vector<std::uint32_t> denseRanks(const std::vector<SymbolId>& seq, std::vector<SymbolId>* order) {
  std::unordered_map<SymbolId, std::uint32_t> rank;
  std::vector<std::uint32_t> out;
  out.reserve(seq.size());
  for (SymbolId s : seq) {
    auto [it, fresh] = rank.try_emplace(s, static_cast<std::uint32_t>(rank.size()));
    if (fresh && order) order->push_back(s);
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

Index leafLzSize(const Xslp& g, Index maxLeaves) {
  auto seq = leafString(g, maxLeaves, nullptr);
  auto ranks = denseRanks(seq, nullptr);
  return lz77(std::span<const std::uint32_t>(ranks)).size();
}

Xslp recompress(const Xslp& g, Index maxLeaves, std::vector<SymbolId>* leafRemap) {
  std::vector<Index> bounds;
  auto seq = leafString(g, maxLeaves, &bounds);
  std::vector<SymbolId> order;
  auto ranks = denseRanks(seq, &order);
  auto parse = lz77(std::span<const std::uint32_t>(ranks));

  Xslp out(g.seed_);
  out.tagCounter_ = g.tagCounter_;
  std::vector<SymbolId> leaf(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    const Xslp::Node& n = g.nodes_[order[r]];
    Xslp::Node copy;
    copy.kind = n.kind;
    copy.letter = n.letter;
    copy.length = n.length;
    copy.tag = n.tag;
    leaf[r] = out.addNode(copy);
  }
  std::vector<Index> charPos(seq.size() + 1, 0);
  for (std::size_t i = 0; i < seq.size(); ++i) charPos[i + 1] = charPos[i] + g.nodes_[seq[i]].length;

  SymbolId prefix = kNoSymbol;
  Index pos = 0;
  for (const auto& ph : parse) {
    SymbolId sym;
    if (ph.literal) {
      sym = leaf[ph.symbol];
    } else if (ph.source + ph.length <= pos) {
      sym = out.extract(prefix, charPos[ph.source], charPos[ph.source + ph.length]);
    } else {
      // Self-overlapping copy: a power of the period followed by a prefix cut.
      Index d = pos - ph.source;
      SymbolId period = out.extract(prefix, charPos[ph.source], charPos[pos]);
      SymbolId pw = out.power(period, (ph.length + d - 1) / d);
      Index total = charPos[pos + ph.length] - charPos[pos];
      sym = out.length(pw) == total ? pw : out.extract(pw, 0, total);
    }
    prefix = prefix == kNoSymbol ? sym : out.concat(prefix, sym);
    pos += ph.length;
  }
  for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
    Index lo = charPos[bounds[b]], hi = charPos[bounds[b + 1]];
    out.starts_.push_back(out.extract(prefix, lo, hi));
  }
  std::vector<SymbolId> remap;
  Xslp result = out.compacted(&remap);
  if (leafRemap) {
    leafRemap->assign(g.symbolCount(), kNoSymbol);
    for (std::size_t r = 0; r < order.size(); ++r) (*leafRemap)[order[r]] = remap[leaf[r]];
  }
  return result;
}

HatGrammar hatGrammar(const Xslp& g) {
  HatGrammar h{Xslp(g.seed_), std::vector<SymbolId>(g.symbolCount(), kNoSymbol)};
  Xslp& out = h.grammar;
  auto& map = h.map;
  std::vector<std::pair<SymbolId, bool>> stack;
  for (SymbolId r : g.starts_) {
    stack.push_back({g.resolve(r), false});
    while (!stack.empty()) {
      auto [s, expanded] = stack.back();
      stack.pop_back();
      if (map[s] != kNoSymbol) continue;
      const Xslp::Node& n = g.nodes_[s];
      if (n.kind == Xslp::NodeKind::Binary) {
        SymbolId l = g.resolve(n.left), rr = g.resolve(n.right);
        if (!expanded) {
          stack.push_back({s, true});
          stack.push_back({rr, false});
          stack.push_back({l, false});
          continue;
        }
        map[s] = out.makeBinary(map[l], map[rr]);
      } else if (n.kind == Xslp::NodeKind::Terminal) {
        map[s] = out.terminal(n.letter);
      } else {
        SymbolId head = out.terminal(Letter::sentinel(s, 0));
        if (n.length == 1) {
          map[s] = head;
        } else {
          SymbolId dollar = out.terminal(Letter::dollar(s));
          SymbolId rest = n.length == 2 ? dollar : out.power(dollar, n.length - 1);
          map[s] = out.makeBinary(head, rest);
        }
      }
    }
    out.starts_.push_back(map[g.resolve(r)]);
  }
  for (SymbolId s = 0; s < g.symbolCount(); ++s)
    if (map[s] == kNoSymbol) map[s] = map[g.resolve(s)];
  return h;
}

}  // namespace eqgram
