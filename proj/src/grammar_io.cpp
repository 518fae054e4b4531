#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "eqgram/formats.hpp"

namespace eqgram {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

bool skippable(const std::vector<std::string>& toks) { return toks.empty() || toks[0][0] == '#'; }

std::optional<std::uint64_t> toNumber(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::uint64_t number(const std::string& s, std::size_t line) {
  auto v = toNumber(s);
  if (!v) throw ParseError(line, "expected a non-negative decimal, got '" + s + "'");
  return *v;
}

}  // namespace

Letter parseLetter(const std::string& token) {
  if (token.empty()) throw InputError("empty letter");
  if (token[0] == '@') {
    auto dot = token.find('.');
    if (dot == std::string::npos) throw InputError("sentinel letter needs @<sym>.<off>");
    auto sym = toNumber(std::string_view(token).substr(1, dot - 1));
    auto off = toNumber(std::string_view(token).substr(dot + 1));
    if (!sym || !off || *sym >= kNoSymbol) throw InputError("malformed sentinel letter '" + token + "'");
    return Letter::sentinel(static_cast<SymbolId>(*sym), *off);
  }
  if (token[0] == '$') {
    auto sym = toNumber(std::string_view(token).substr(1));
    if (!sym || *sym >= kNoSymbol) throw InputError("malformed dollar letter '" + token + "'");
    return Letter::dollar(static_cast<SymbolId>(*sym));
  }
  auto b = toNumber(token);
  if (!b || *b > 255) throw InputError("byte out of range '" + token + "'");
  return Letter::byte(static_cast<std::uint8_t>(*b));
}

std::string formatGrammar(const Xslp& g) {
  Xslp c = g.compacted();
  std::ostringstream out;
  for (SymbolId s = 0; s < c.symbolCount(); ++s) {
    Production p = c.production(s);
    switch (p.kind) {
      case Production::Kind::Terminal:
        out << "T " << s << ' ' << formatLetter(p.letter) << '\n';
        break;
      case Production::Kind::PseudoTerminal:
        out << "P " << s << ' ' << p.length << '\n';
        break;
      case Production::Kind::Binary:
        out << "N " << s << ' ' << p.left << ' ' << p.right << '\n';
        break;
    }
  }
  out << 'S';
  for (SymbolId s : c.starts()) out << ' ' << s;
  out << '\n';
  return out.str();
}

Xslp parseGrammar(std::istream& in) {
  Xslp g;
  std::unordered_map<std::uint64_t, SymbolId> ids;
  bool sawStart = false;
  std::size_t lineNo = 0;
  auto lookup = [&](const std::string& tok) {
    auto it = ids.find(number(tok, lineNo));
    if (it == ids.end()) throw ParseError(lineNo, "undefined symbol " + tok);
    return it->second;
  };
  for (std::string line; std::getline(in, line);) {
    ++lineNo;
    auto toks = tokenize(line);
    if (skippable(toks)) continue;
    const std::string& tag = toks[0];
    if (tag == "S") {
      if (sawStart) throw ParseError(lineNo, "duplicate start list");
      sawStart = true;
      for (std::size_t i = 1; i < toks.size(); ++i) g.starts().push_back(lookup(toks[i]));
      continue;
    }
    std::size_t want = tag == "N" ? 4 : 3;
    if ((tag != "T" && tag != "P" && tag != "N") || toks.size() != want)
      throw ParseError(lineNo, "expected 'T id letter', 'P id len', 'N id l r' or 'S ids'");
    std::uint64_t id = number(toks[1], lineNo);
    if (ids.count(id)) throw ParseError(lineNo, "symbol " + toks[1] + " defined twice");
    SymbolId s = kNoSymbol;
    try {
      if (tag == "T") {
        s = g.terminal(parseLetter(toks[2]));
      } else if (tag == "P") {
        s = g.pseudoTerminal(number(toks[2], lineNo));
      } else {
        SymbolId l = lookup(toks[2]), r = lookup(toks[3]);
        s = g.binary(l, r);
      }
    } catch (const InputError& e) {
      throw ParseError(lineNo, e.what());
    }
    ids[id] = s;
  }
  if (!sawStart) throw ParseError(lineNo, "missing start list");
  return g;
}

Xslp parseGrammarString(const std::string& text) {
  std::istringstream in(text);
  return parseGrammar(in);
}

std::string formatEquations(const EquationSystem& e) {
  std::ostringstream out;
  if (e.multi) {
    out << "lens";
    for (Index l : e.lengths) out << ' ' << l;
  } else {
    out << "n " << (e.lengths.empty() ? 0 : e.lengths[0]);
  }
  out << '\n';
  for (const auto& q : e.equations) {
    if (e.multi) out << q.i << ' ';
    out << q.x << ' ' << q.xEnd << ' ';
    if (e.multi) out << q.j << ' ';
    out << q.y << ' ' << q.yEnd << '\n';
  }
  return out.str();
}

EquationSystem parseEquations(std::istream& in) {
  EquationSystem e;
  bool header = false;
  std::size_t lineNo = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineNo;
    auto toks = tokenize(line);
    if (skippable(toks)) continue;
    if (!header) {
      if (toks[0] == "n" && toks.size() == 2) {
        e.lengths = {number(toks[1], lineNo)};
      } else if (toks[0] == "lens" && toks.size() >= 2) {
        e.multi = true;
        for (std::size_t i = 1; i < toks.size(); ++i) e.lengths.push_back(number(toks[i], lineNo));
      } else {
        throw ParseError(lineNo, "expected 'n <N>' or 'lens <n0> ...'");
      }
      header = true;
      continue;
    }
    SubstringEquation q;
    if (!e.multi && toks.size() == 4) {
      q = {0, number(toks[0], lineNo), number(toks[1], lineNo), 0, number(toks[2], lineNo), number(toks[3], lineNo)};
    } else if (e.multi && toks.size() == 6) {
      auto i = number(toks[0], lineNo), j = number(toks[3], lineNo);
      if (i >= e.lengths.size() || j >= e.lengths.size()) throw ParseError(lineNo, "string index out of range");
      q = {static_cast<std::uint32_t>(i), number(toks[1], lineNo), number(toks[2], lineNo),
           static_cast<std::uint32_t>(j), number(toks[4], lineNo), number(toks[5], lineNo)};
    } else {
      throw ParseError(lineNo, e.multi ? "expected 'i x xEnd j y yEnd'" : "expected 'x xEnd y yEnd'");
    }
    if (q.x > q.xEnd || q.y > q.yEnd || q.xEnd - q.x != q.yEnd - q.y)
      throw ParseError(lineNo, "fragments must have equal non-negative lengths");
    if (q.xEnd > e.lengths[q.i] || q.yEnd > e.lengths[q.j]) throw ParseError(lineNo, "fragment out of range");
    e.equations.push_back(q);
  }
  if (!header) throw ParseError(lineNo, "missing 'n' or 'lens' header");
  return e;
}

EquationSystem parseEquationsString(const std::string& text) {
  std::istringstream in(text);
  return parseEquations(in);
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << content;
  if (!out) throw InputError("write failed for " + path);
}

}  // namespace eqgram
