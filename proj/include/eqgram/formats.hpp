#pragma once

#include <iosfwd>
#include <string>

#include "eqgram/equation_solver.hpp"
#include "eqgram/grammar.hpp"

namespace eqgram {

// Grammar text format, one record per line:
//   T <id> <letter>      terminal; letter is a byte 0-255, @<sym>.<off> or $<sym>
//   P <id> <len>         pseudo-terminal
//   N <id> <left> <right>
//   S <id>...            start list
// Ids are decimal and must be defined before use. Blank and '#' lines are skipped.
std::string formatGrammar(const Xslp& g);
Xslp parseGrammar(std::istream& in);
Xslp parseGrammarString(const std::string& text);

// Equation text format: "n <N>" or "lens <n0> <n1> ...", then one equation
// per line, "<x> <xEnd> <y> <yEnd>" or "<i> <x> <xEnd> <j> <y> <yEnd>".
std::string formatEquations(const EquationSystem& e);
EquationSystem parseEquations(std::istream& in);
EquationSystem parseEquationsString(const std::string& text);

Letter parseLetter(const std::string& token);

std::string readFile(const std::string& path);
void writeFile(const std::string& path, const std::string& content);

}  // namespace eqgram
