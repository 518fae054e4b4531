#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "eqgram/grammar.hpp"

namespace eqgram {

// Fragment [start, start + len) of one of the index's strings.
struct PillarHandle {
  std::uint32_t source = 0;
  Index start = 0;
  Index len = 0;
  friend bool operator==(const PillarHandle&, const PillarHandle&) = default;
};

class PillarIndex {
 public:
  enum class Backend { Plain, Compressed };

  static PillarIndex plain(std::vector<LetterString> texts);
  // Compressed backend over the starts of a frozen grammar.
  static PillarIndex preprocess(const Xslp& g);

  Backend backend() const { return backend_; }
  std::size_t sources() const { return lengths_.size(); }
  PillarHandle whole(std::uint32_t source) const;

  Index length(const PillarHandle& h) const;
  PillarHandle extract(const PillarHandle& h, Index a, Index b) const;
  Letter access(const PillarHandle& h, Index i) const;
  Index lcp(const PillarHandle& a, const PillarHandle& b) const;
  Index lcs(const PillarHandle& a, const PillarHandle& b) const;
  // Exact occurrences of p in t; requires 1 <= |p| and |t| <= 2|p|.
  ArithmeticProgression ipm(const PillarHandle& p, const PillarHandle& t) const;

  // Over the bit string marking pseudo-terminal starts of a source.
  // rank(i) counts marks in [0, i); select(r) is the position of the mark with rank r.
  Index rank(std::uint32_t source, Index i) const;
  Index select(std::uint32_t source, Index r) const;
  Index marks(std::uint32_t source) const;

  const Xslp* hatGrammar() const { return hat_.get(); }

 private:
  void check(const PillarHandle& h) const;
  Letter hatAccess(std::uint32_t source, Index pos) const;

  Backend backend_ = Backend::Plain;
  std::vector<Index> lengths_;
  std::vector<LetterString> texts_;
  std::shared_ptr<const Xslp> source_;
  std::shared_ptr<const Xslp> hat_;
  std::vector<SymbolId> hatStarts_;
  std::vector<Index> ones_;
};

}  // namespace eqgram
