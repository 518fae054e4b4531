#include "eqgram/pillar.hpp"

#include <algorithm>
#include <span>

namespace eqgram {

PillarIndex PillarIndex::plain(std::vector<LetterString> texts) {
  PillarIndex ix;
  ix.backend_ = Backend::Plain;
  for (const auto& t : texts) ix.lengths_.push_back(t.size());
  ix.texts_ = std::move(texts);
  return ix;
}

PillarIndex PillarIndex::preprocess(const Xslp& g) {
  PillarIndex ix;
  ix.backend_ = Backend::Compressed;
  auto source = std::make_shared<Xslp>(g);
  auto hat = std::make_shared<Xslp>(eqgram::hatGrammar(*source).grammar);
  ix.hatStarts_ = hat->starts();
  for (SymbolId s : ix.hatStarts_) ix.lengths_.push_back(hat->length(s));
  // Hat symbols are created children first, so one pass in id order suffices.
  ix.ones_.assign(hat->symbolCount(), 0);
  for (SymbolId s = 0; s < hat->symbolCount(); ++s) {
    Production p = hat->production(s);
    if (p.kind == Production::Kind::Binary)
      ix.ones_[s] = ix.ones_[hat->resolve(p.left)] + ix.ones_[hat->resolve(p.right)];
    else
      ix.ones_[s] = p.letter.kind == Letter::Kind::Sentinel && p.letter.offset == 0 ? 1 : 0;
  }
  ix.source_ = std::move(source);
  ix.hat_ = std::move(hat);
  return ix;
}

PillarHandle PillarIndex::whole(std::uint32_t source) const {
  if (source >= lengths_.size()) throw InputError("pillar: unknown source");
  return {source, 0, lengths_[source]};
}

void PillarIndex::check(const PillarHandle& h) const {
  if (h.source >= lengths_.size()) throw InputError("pillar: unknown source");
  if (h.start > lengths_[h.source] || h.len > lengths_[h.source] - h.start)
    throw InputError("pillar: handle out of range");
}

Index PillarIndex::length(const PillarHandle& h) const {
  check(h);
  return h.len;
}

PillarHandle PillarIndex::extract(const PillarHandle& h, Index a, Index b) const {
  check(h);
  if (a > b || b > h.len) throw InputError("pillar: extract out of range");
  return {h.source, h.start + a, b - a};
}

Letter PillarIndex::hatAccess(std::uint32_t source, Index pos) const {
  return hat_->access(hatStarts_[source], pos);
}

Letter PillarIndex::access(const PillarHandle& h, Index i) const {
  check(h);
  if (i >= h.len) throw InputError("pillar: access out of range");
  Index pos = h.start + i;
  if (backend_ == Backend::Plain) return texts_[h.source][pos];
  Letter l = hatAccess(h.source, pos);
  if (l.kind != Letter::Kind::Dollar) return l;
  Index head = select(h.source, rank(h.source, pos) - 1);
  return Letter::sentinel(l.symbol, pos - head);
}

Index PillarIndex::lcp(const PillarHandle& a, const PillarHandle& b) const {
  check(a);
  check(b);
  Index m = std::min(a.len, b.len);
  if (backend_ == Backend::Plain) {
    const auto& x = texts_[a.source];
    const auto& y = texts_[b.source];
    Index l = 0;
    while (l < m && x[a.start + l] == y[b.start + l]) ++l;
    return l;
  }
  Index l = hat_->lce(hatStarts_[a.source], a.start, hatStarts_[b.source], b.start, m);
  if (l == 0) return 0;
  return access(a, 0) == access(b, 0) ? l : 0;
}

Index PillarIndex::lcs(const PillarHandle& a, const PillarHandle& b) const {
  check(a);
  check(b);
  Index m = std::min(a.len, b.len);
  if (backend_ == Backend::Plain) {
    const auto& x = texts_[a.source];
    const auto& y = texts_[b.source];
    Index l = 0;
    while (l < m && x[a.start + a.len - 1 - l] == y[b.start + b.len - 1 - l]) ++l;
    return l;
  }
  Index l = hat_->lcs(hatStarts_[a.source], a.start + a.len, hatStarts_[b.source], b.start + b.len, m);
  if (l == 0) return 0;
  return access(a, a.len - 1) == access(b, b.len - 1) ? l : 0;
}

ArithmeticProgression PillarIndex::ipm(const PillarHandle& p, const PillarHandle& t) const {
  check(p);
  check(t);
  if (p.len == 0 || t.len > 2 * p.len) throw InputError("ipm: requires 1 <= |p| and |t| <= 2|p|");
  if (t.len < p.len) return {};
  std::vector<Index> occ;
  if (backend_ == Backend::Plain) {
    std::span<const Letter> ps(texts_[p.source].data() + p.start, p.len);
    std::span<const Letter> ts(texts_[t.source].data() + t.start, t.len);
    occ = exactOccurrences(ps, ts);
  } else {
    // Rolling fingerprints of every alignment of p^ in t^.
    const Xslp& h = *hat_;
    std::uint64_t target = h.fingerprint(hatStarts_[p.source], p.start, p.len).value;
    LetterString text = h.expand(hatStarts_[t.source], t.start, t.len);
    std::uint64_t base = h.base(), top = modPow(base, p.len - 1), v = 0;
    for (Index i = 0; i < p.len; ++i) v = modAdd(modMul(v, base), h.letterCode(text[i]));
    for (Index x = 0;; ++x) {
      if (v == target) occ.push_back(x);
      if (x + p.len >= t.len) break;
      v = modSub(v, modMul(h.letterCode(text[x]), top));
      v = modAdd(modMul(v, base), h.letterCode(text[x + p.len]));
    }
    // A pure run of one pseudo-terminal not at its head matches every alignment
    // of the $ run in the hat string; only the offset-matching one is real.
    Letter first = access(p, 0);
    if (first.kind == Letter::Kind::Sentinel && first.offset > 0 &&
        first.offset + p.len <= source_->length(first.symbol)) {
      if (occ.empty()) return {};
      Letter at = access(t, occ.front());
      if (at.kind != Letter::Kind::Sentinel || at.symbol != first.symbol)
        throw InternalError("ipm: hat match outside the pseudo-terminal run");
      std::int64_t cand = static_cast<std::int64_t>(occ.front() + first.offset) - static_cast<std::int64_t>(at.offset);
      if (cand >= 0 && std::binary_search(occ.begin(), occ.end(), static_cast<Index>(cand)))
        return {static_cast<Index>(cand), 1, 1};
      return {};
    }
  }
  auto ap = ArithmeticProgression::fromSorted(occ);
  if (!ap) throw InternalError("ipm: occurrences do not form an arithmetic progression");
  return *ap;
}

Index PillarIndex::marks(std::uint32_t source) const {
  if (source >= lengths_.size()) throw InputError("pillar: unknown source");
  if (backend_ == Backend::Plain) {
    Index c = 0;
    for (const auto& l : texts_[source]) c += l.kind == Letter::Kind::Sentinel && l.offset == 0;
    return c;
  }
  return ones_[hat_->resolve(hatStarts_[source])];
}

Index PillarIndex::rank(std::uint32_t source, Index i) const {
  if (source >= lengths_.size() || i > lengths_[source]) throw InputError("rank: out of range");
  if (backend_ == Backend::Plain) {
    Index c = 0;
    for (Index k = 0; k < i; ++k) {
      const auto& l = texts_[source][k];
      c += l.kind == Letter::Kind::Sentinel && l.offset == 0;
    }
    return c;
  }
  const Xslp& h = *hat_;
  SymbolId s = h.resolve(hatStarts_[source]);
  Index res = 0;
  while (i > 0) {
    if (i == h.length(s)) return res + ones_[s];
    Production p = h.production(s);
    Index L = h.length(p.left);
    if (i <= L) {
      s = h.resolve(p.left);
    } else {
      res += ones_[h.resolve(p.left)];
      i -= L;
      s = h.resolve(p.right);
    }
  }
  return res;
}

Index PillarIndex::select(std::uint32_t source, Index r) const {
  if (r >= marks(source)) throw InputError("select: rank out of range");
  if (backend_ == Backend::Plain) {
    for (Index k = 0;; ++k) {
      const auto& l = texts_[source][k];
      if (l.kind == Letter::Kind::Sentinel && l.offset == 0 && r-- == 0) return k;
    }
  }
  const Xslp& h = *hat_;
  SymbolId s = h.resolve(hatStarts_[source]);
  Index pos = 0;
  while (true) {
    Production p = h.production(s);
    if (p.kind != Production::Kind::Binary) return pos;
    SymbolId l = h.resolve(p.left);
    if (r < ones_[l]) {
      s = l;
    } else {
      r -= ones_[l];
      pos += h.length(l);
      s = h.resolve(p.right);
    }
  }
}

}  // namespace eqgram
