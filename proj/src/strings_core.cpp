#include "eqgram/strings_core.hpp"

#include <algorithm>

namespace eqgram {

namespace {

// Prefix doubling with counting sort; symbols must be dense ranks in [0, sigma).
std::vector<std::uint32_t> suffixArray(const std::vector<std::uint32_t>& s, std::uint32_t sigma) {
  const std::size_t n = s.size();
  std::vector<std::uint32_t> sa(n), rank(s), tmp(n), cnt(std::max<std::size_t>(sigma, n) + 1);
  for (std::size_t i = 0; i < n; ++i) ++cnt[s[i]];
  for (std::size_t i = 1; i < cnt.size(); ++i) cnt[i] += cnt[i - 1];
  for (std::size_t i = n; i-- > 0;) sa[--cnt[s[i]]] = static_cast<std::uint32_t>(i);
  std::vector<std::uint32_t> second(n);
  for (std::size_t h = 1;; h <<= 1) {
    // Order by (rank[i], rank[i+h]) with missing second key smallest.
    std::size_t p = 0;
    for (std::size_t i = n - std::min(n, h); i < n; ++i) second[p++] = static_cast<std::uint32_t>(i);
    for (std::size_t i = 0; i < n; ++i)
      if (sa[i] >= h) second[p++] = static_cast<std::uint32_t>(sa[i] - h);
    std::fill(cnt.begin(), cnt.end(), 0);
    for (std::size_t i = 0; i < n; ++i) ++cnt[rank[i]];
    for (std::size_t i = 1; i < cnt.size(); ++i) cnt[i] += cnt[i - 1];
    for (std::size_t i = n; i-- > 0;) sa[--cnt[rank[second[i]]]] = second[i];
    tmp[sa[0]] = 0;
    std::uint32_t classes = 1;
    for (std::size_t i = 1; i < n; ++i) {
      auto a = sa[i - 1], b = sa[i];
      bool same = rank[a] == rank[b] && (a + h < n ? (b + h < n && rank[a + h] == rank[b + h]) : b + h >= n);
      if (!same) ++classes;
      tmp[b] = classes - 1;
    }
    rank.swap(tmp);
    if (classes == n) break;
  }
  return sa;
}

}  // namespace

LZFactorization lz77(std::span<const std::uint32_t> x) {
  LZFactorization out;
  const std::size_t n = x.size();
  if (n == 0) return out;

  std::vector<std::uint32_t> alphabet(x.begin(), x.end());
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
  std::vector<std::uint32_t> s(n);
  for (std::size_t i = 0; i < n; ++i)
    s[i] = static_cast<std::uint32_t>(std::lower_bound(alphabet.begin(), alphabet.end(), x[i]) - alphabet.begin());
  auto sa = suffixArray(s, static_cast<std::uint32_t>(alphabet.size()));

  // Lexicographic neighbours with a smaller text position (PSV/NSV over SA).
  constexpr std::uint32_t kNone = ~std::uint32_t{0};
  std::vector<std::uint32_t> psv(n, kNone), nsv(n, kNone), stack;
  for (std::size_t i = 0; i < n; ++i) {
    while (!stack.empty() && stack.back() > sa[i]) {
      nsv[stack.back()] = sa[i];
      stack.pop_back();
    }
    if (!stack.empty()) psv[sa[i]] = stack.back();
    stack.push_back(sa[i]);
  }

  auto lcp = [&](std::size_t a, std::size_t b) {
    std::size_t l = 0;
    while (b + l < n && x[a + l] == x[b + l]) ++l;
    return l;
  };
  std::size_t i = 0;
  while (i < n) {
    std::size_t best = 0, src = 0;
    for (auto c : {psv[i], nsv[i]}) {
      if (c == kNone) continue;
      std::size_t l = lcp(c, i);
      if (l > best || (l == best && l > 0 && c < src)) best = l, src = c;
    }
    if (best == 0) {
      out.push_back({true, x[i], 0, 1});
      ++i;
    } else {
      out.push_back({false, 0, src, best});
      i += best;
    }
  }
  return out;
}

LZFactorization lz77(const Bytes& x) {
  std::vector<std::uint32_t> v(x.begin(), x.end());
  return lz77(std::span<const std::uint32_t>(v));
}

}  // namespace eqgram
