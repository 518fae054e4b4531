#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eqgram/strings_core.hpp"

namespace eqgram {

using SymbolId = std::uint32_t;
inline constexpr SymbolId kNoSymbol = ~SymbolId{0};
inline constexpr std::uint64_t kDefaultSeed = 0x5eed'e09a'c0de'2024ULL;

// Process-wide default, overridable through EQGRAM_SEED.
std::uint64_t defaultSeed();

// One character of an expansion: a byte, the i-th placeholder of a
// pseudo-terminal, or the hat-grammar letter $ of a pseudo-terminal.
struct Letter {
  enum class Kind : std::uint8_t { Byte = 0, Sentinel = 1, Dollar = 2 };
  Kind kind = Kind::Byte;
  SymbolId symbol = 0;
  Index offset = 0;  // byte value for Kind::Byte

  static constexpr Letter byte(std::uint8_t b) { return {Kind::Byte, 0, b}; }
  static constexpr Letter sentinel(SymbolId s, Index off) { return {Kind::Sentinel, s, off}; }
  static constexpr Letter dollar(SymbolId s) { return {Kind::Dollar, s, 0}; }
  bool isByte() const { return kind == Kind::Byte; }
  std::uint8_t value() const { return static_cast<std::uint8_t>(offset); }
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

using LetterString = std::vector<Letter>;

// "97" style for bytes, "@12.3" for sentinels, "$12" for dollars.
std::string formatLetter(const Letter& l);
LetterString lettersOf(const Bytes& b);

struct Production {
  enum class Kind : std::uint8_t { Terminal, PseudoTerminal, Binary };
  Kind kind = Kind::Terminal;
  Letter letter{};
  Index length = 1;
  SymbolId left = kNoSymbol;
  SymbolId right = kNoSymbol;

  static Production terminal(Letter l) { return {Kind::Terminal, l, 1, kNoSymbol, kNoSymbol}; }
  static Production pseudoTerminal(Index len) { return {Kind::PseudoTerminal, {}, len, kNoSymbol, kNoSymbol}; }
  static Production binary(SymbolId l, SymbolId r) { return {Kind::Binary, {}, 0, l, r}; }
};

struct Fingerprint {
  std::uint64_t value = 0;
  std::uint64_t basePower = 1;
  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

// Arithmetic modulo the fingerprint prime 2^61 - 1.
std::uint64_t modMul(std::uint64_t a, std::uint64_t b);
std::uint64_t modAdd(std::uint64_t a, std::uint64_t b);
std::uint64_t modSub(std::uint64_t a, std::uint64_t b);
std::uint64_t modPow(std::uint64_t a, Index e);

class Xslp;
struct HatGrammar;
Xslp recompress(const Xslp& g, Index maxLeaves, std::vector<SymbolId>* leafRemap);
HatGrammar hatGrammar(const Xslp& g);

class Xslp {
 public:
  static constexpr std::uint64_t kModulus = (1ULL << 61) - 1;

  explicit Xslp(std::uint64_t seed = defaultSeed());

  SymbolId newSymbol(const Production& p);
  SymbolId terminal(Letter l) { return newSymbol(Production::terminal(l)); }
  SymbolId terminal(std::uint8_t b) { return terminal(Letter::byte(b)); }
  SymbolId pseudoTerminal(Index len) { return newSymbol(Production::pseudoTerminal(len)); }
  SymbolId binary(SymbolId l, SymbolId r) { return newSymbol(Production::binary(l, r)); }

  // Balanced concatenation (AVL join).
  SymbolId concat(SymbolId a, SymbolId b);
  // Symbol expanding to exp(a)[i..j); cuts may not fall inside a pseudo-terminal.
  SymbolId extract(SymbolId a, Index i, Index j);
  // Symbol expanding to exp(a)^e, e >= 1.
  SymbolId power(SymbolId a, Index e);
  // Balanced symbol for a non-empty letter string of bytes.
  SymbolId fromBytes(const Bytes& b);

  Letter access(SymbolId a, Index pos) const;
  Index length(SymbolId a) const;
  std::uint32_t height(SymbolId a) const;
  Fingerprint fingerprint(SymbolId a) const;
  Fingerprint fingerprint(SymbolId a, Index i, Index len) const;
  // Longest common prefix of exp(a)[i..) and exp(b)[j..), at most maxLen.
  Index lce(SymbolId a, Index i, SymbolId b, Index j, Index maxLen) const;
  // Longest common suffix of exp(a)[..i) and exp(b)[..j), at most maxLen.
  Index lcs(SymbolId a, Index i, SymbolId b, Index j, Index maxLen) const;

  LetterString expand(SymbolId a) const;
  LetterString expand(SymbolId a, Index i, Index len) const;
  // The sequence of leaf symbols (terminals and pseudo-terminals) of exp(a).
  std::vector<SymbolId> leaves(SymbolId a) const;

  Production production(SymbolId a) const;
  bool isPseudoTerminal(SymbolId a) const;
  bool isTerminal(SymbolId a) const;
  SymbolId resolve(SymbolId a) const;
  bool contains(SymbolId a) const { return a < nodes_.size(); }

  std::vector<SymbolId>& starts() { return starts_; }
  const std::vector<SymbolId>& starts() const { return starts_; }

  // Symbols in storage, including unreachable ones.
  std::size_t symbolCount() const { return nodes_.size(); }
  // Grammar size: symbols reachable from the starts.
  std::size_t size() const;
  std::size_t size(const std::vector<SymbolId>& roots) const;
  // Distinct pseudo-terminals reachable from the starts.
  std::vector<SymbolId> pseudoTerminals() const;
  bool reaches(SymbolId from, SymbolId target) const;

  // Rewriting of a pseudo-terminal x: every occurrence of exp(x) becomes exp(target).
  void redefine(SymbolId x, SymbolId target);
  void redefineAsBinary(SymbolId x, SymbolId left, SymbolId right);
  void redefineAsTerminal(SymbolId x, Letter l);

  // Copy restricted to symbols reachable from the starts, in topological order.
  Xslp compacted(std::vector<SymbolId>* remap = nullptr) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t base() const { return base_; }
  std::uint64_t letterCode(const Letter& l) const;
  // Fingerprint of the run of pseudo-terminal a's letters [i..i+len).
  Fingerprint runFingerprint(SymbolId a, Index i, Index len) const;
  Fingerprint combine(const Fingerprint& x, const Fingerprint& y) const;

 private:
  friend Xslp recompress(const Xslp&, Index, std::vector<SymbolId>*);
  friend HatGrammar hatGrammar(const Xslp&);

  enum class NodeKind : std::uint8_t { Terminal, Pseudo, Binary, Alias };
  struct Node {
    NodeKind kind = NodeKind::Terminal;
    Letter letter{};
    Index length = 1;
    SymbolId left = kNoSymbol;
    SymbolId right = kNoSymbol;
    std::uint64_t tag = 0;
    mutable std::uint64_t epoch = 0;
    mutable std::uint32_t height = 0;
    mutable Fingerprint fp{};
  };

  SymbolId addNode(Node n);
  SymbolId makeBinary(SymbolId l, SymbolId r);
  SymbolId join(SymbolId a, SymbolId b);
  SymbolId rebalance(SymbolId l, SymbolId r);
  SymbolId extractRec(SymbolId a, Index i, Index j);
  void ensureValid(SymbolId a) const;
  bool valid(const Node& n) const;
  void computeCaches(const Node& n) const;
  void checkSymbol(SymbolId a) const;
  std::uint64_t freshTag();
  Fingerprint fragmentRec(SymbolId a, Index i, Index len) const;
  const Node& node(SymbolId a) const { return nodes_[a]; }

  std::vector<Node> nodes_;
  std::vector<SymbolId> starts_;
  std::uint64_t seed_;
  std::uint64_t base_;
  std::uint64_t tagCounter_ = 0;
  std::uint64_t epoch_ = 1;
};

// Equivalent grammar rebuilt from the LZ77 parse of the leaf string.
// Pseudo-terminal lengths and identities (fingerprint tags) are kept; ids change.
Xslp recompress(const Xslp& g, Index maxLeaves = 1'000'000, std::vector<SymbolId>* leafRemap = nullptr);

// Size of the LZ77 parse of the leaf string of the starts.
Index leafLzSize(const Xslp& g, Index maxLeaves = 1'000'000);

struct HatGrammar {
  Xslp grammar;
  std::vector<SymbolId> map;  // source id -> hat id (kNoSymbol if unreachable)
};

// Every pseudo-terminal A becomes #_0^A followed by |A|-1 copies of $^A.
HatGrammar hatGrammar(const Xslp& g);

}  // namespace eqgram
