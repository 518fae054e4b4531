#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eqgram/errors.hpp"

namespace eqgram {

using Index = std::uint64_t;
using Bytes = std::vector<std::uint8_t>;

inline Bytes toBytes(std::string_view s) { return Bytes(s.begin(), s.end()); }
inline std::string toString(const Bytes& b) { return std::string(b.begin(), b.end()); }

template <class T>
struct Mismatch {
  Index position = 0;
  T patternChar{};
  T textChar{};
  friend bool operator==(const Mismatch&, const Mismatch&) = default;
};

template <class T>
using MismatchInfo = std::vector<Mismatch<T>>;

struct ArithmeticProgression {
  Index start = 0;
  Index diff = 1;
  Index count = 0;

  bool empty() const { return count == 0; }
  Index at(Index i) const { return start + i * diff; }
  Index last() const { return at(count - 1); }
  bool contains(Index x) const {
    if (count == 0 || x < start) return false;
    if (count == 1) return x == start;
    return (x - start) % diff == 0 && (x - start) / diff < count;
  }
  std::vector<Index> toVector() const {
    std::vector<Index> out;
    out.reserve(count);
    for (Index i = 0; i < count; ++i) out.push_back(at(i));
    return out;
  }
  // Sorted list to progression; nullopt if the gaps are not all equal.
  static std::optional<ArithmeticProgression> fromSorted(const std::vector<Index>& v) {
    ArithmeticProgression ap;
    if (v.empty()) return ap;
    ap.start = v[0];
    ap.count = v.size();
    if (v.size() >= 2) ap.diff = v[1] - v[0];
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] - v[i - 1] != ap.diff) return std::nullopt;
    return ap;
  }
  friend bool operator==(const ArithmeticProgression& a, const ArithmeticProgression& b) {
    if (a.count != b.count) return false;
    if (a.count == 0) return true;
    if (a.start != b.start) return false;
    return a.count == 1 || a.diff == b.diff;
  }
};

struct LzPhrase {
  bool literal = true;
  std::uint64_t symbol = 0;  // literal only
  Index source = 0;          // previous factor only
  Index length = 1;
  friend bool operator==(const LzPhrase&, const LzPhrase&) = default;
};

using LZFactorization = std::vector<LzPhrase>;

template <class S>
concept Sequence = requires(const S& s, std::size_t i) {
  s.size();
  s[i];
};

template <Sequence S>
using ElementOf = std::remove_cvref_t<decltype(std::declval<const S&>()[0])>;

// Mismatches of X against Y; nullopt once more than cap are found.
template <Sequence A, Sequence B>
std::optional<MismatchInfo<ElementOf<A>>> hammingMismatchesCapped(const A& x, const B& y, Index cap) {
  if (x.size() != y.size()) throw InputError("hammingMismatchesCapped: length mismatch");
  MismatchInfo<ElementOf<A>> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == y[i]) continue;
    if (out.size() == cap) return std::nullopt;
    out.push_back({i, x[i], y[i]});
  }
  return out;
}

template <Sequence A, Sequence B>
Index hammingDistance(const A& x, const B& y) {
  if (x.size() != y.size()) throw InputError("hammingDistance: length mismatch");
  Index d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d += !(x[i] == y[i]);
  return d;
}

// Number of mismatches, stopping as soon as it exceeds cap.
template <Sequence A, Sequence B>
Index mismatchCountCapped(const A& x, const B& y, Index cap) {
  Index d = 0;
  for (std::size_t i = 0; i < x.size() && d <= cap; ++i) d += !(x[i] == y[i]);
  return d;
}

// border[i] = length of the longest proper border of x[0..i].
template <Sequence S>
std::vector<Index> borderArray(const S& x) {
  std::vector<Index> b(x.size(), 0);
  for (std::size_t i = 1; i < x.size(); ++i) {
    Index k = b[i - 1];
    while (k > 0 && !(x[i] == x[k])) k = b[k - 1];
    if (x[i] == x[k]) ++k;
    b[i] = k;
  }
  return b;
}

template <Sequence S>
Index smallestPeriod(const S& x) {
  if (x.size() == 0) throw InputError("smallestPeriod: empty string");
  return x.size() - borderArray(x).back();
}

template <Sequence S>
bool isPrimitive(const S& q) {
  if (q.size() == 0) return false;
  Index p = smallestPeriod(q);
  return p == q.size() || q.size() % p != 0;
}

template <Sequence A, Sequence B>
std::vector<Index> exactOccurrences(const A& p, const B& t) {
  std::vector<Index> out;
  const std::size_t m = p.size(), n = t.size();
  if (m > n) return out;
  if (m == 0) {
    for (Index i = 0; i <= n; ++i) out.push_back(i);
    return out;
  }
  auto border = borderArray(p);
  Index k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k > 0 && !(t[i] == p[k])) k = border[k - 1];
    if (t[i] == p[k]) ++k;
    if (k == m) {
      out.push_back(i + 1 - m);
      k = border[k - 1];
    }
  }
  return out;
}

// Smallest a with rot^a(Q) = X, where rot moves the last character to the front.
template <Sequence A, Sequence B>
std::optional<Index> rotationIndex(const A& x, const B& q) {
  if (x.size() != q.size()) throw InputError("rotationIndex: length mismatch");
  if (q.size() == 0) return 0;
  if (!isPrimitive(q)) throw ContractViolation("rotationIndex: Q is not primitive");
  // rot^a(Q) = X iff Q occurs in XX at position a.
  std::vector<ElementOf<A>> xx;
  xx.reserve(2 * x.size() - 1);
  for (std::size_t i = 0; i < x.size(); ++i) xx.push_back(x[i]);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) xx.push_back(x[i]);
  auto occ = exactOccurrences(q, xx);
  if (occ.empty()) return std::nullopt;
  return occ.front();
}

template <Sequence S>
std::vector<ElementOf<S>> rotate(const S& q, Index a) {
  const std::size_t n = q.size();
  std::vector<ElementOf<S>> out(n);
  for (std::size_t j = 0; j < n; ++j) out[(j + a) % n] = q[j];
  return out;
}

template <Sequence A, Sequence B>
std::vector<Index> naiveOccHk(const A& p, const B& t, Index k) {
  std::vector<Index> out;
  const std::size_t m = p.size(), n = t.size();
  if (m > n) return out;
  for (std::size_t x = 0; x + m <= n; ++x) {
    Index d = 0;
    for (std::size_t i = 0; i < m && d <= k; ++i) d += !(p[i] == t[x + i]);
    if (d <= k) out.push_back(x);
  }
  return out;
}

template <class Range>
Index gcdOfSet(const Range& s) {
  Index g = 0;
  for (auto v : s) g = std::gcd(g, static_cast<Index>(v));
  return g;
}

LZFactorization lz77(std::span<const std::uint32_t> x);
LZFactorization lz77(const Bytes& x);

template <class T>
std::vector<T> decompressLz(const LZFactorization& f) {
  std::vector<T> out;
  for (const auto& ph : f) {
    if (ph.literal) {
      out.push_back(static_cast<T>(ph.symbol));
      continue;
    }
    for (Index i = 0; i < ph.length; ++i) out.push_back(out[ph.source + i]);
  }
  return out;
}

// Canonical class labels: equal letters get equal labels, numbered by first appearance.
template <Sequence S>
std::vector<std::uint32_t> canonicalLabels(const S& s) {
  std::map<ElementOf<S>, std::uint32_t> ids;
  std::vector<std::uint32_t> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto [it, fresh] = ids.try_emplace(s[i], static_cast<std::uint32_t>(ids.size()));
    out.push_back(it->second);
  }
  return out;
}

}  // namespace eqgram
