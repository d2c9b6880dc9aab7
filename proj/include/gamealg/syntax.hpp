// Concrete syntax for game terms and specification files.
//
//   term     := choice1
//   choice1  := choice2 { "+" choice2 }          join, player 1
//   choice2  := comp { "&" comp }                meet, player 2
//   comp     := par { "." par }                  composition
//   par      := unary { "||" unary }             parallel
//   unary    := primary [ "^d" ]                 dual
//   primary  := atom | "iota" | "abs" "{" atomlist "}" "(" term ")"
//             | "<" var "|" specname ">" | "(" term ")"
//
// Binary operators associate to the left.  Atoms start with a lowercase
// letter, recursion variables with an uppercase one.  Inside a spec body a
// bare variable names an equation of the enclosing spec:
//
//   spec E { X = a . Y + c ; Y = a . X + d ; }
//
// '#' starts a comment running to end of line.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gamealg/spec.hpp"
#include "gamealg/term.hpp"

namespace gamealg {

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column, std::string production);

  int line() const { return line_; }
  int column() const { return column_; }
  /// Grammar production that was being parsed when the error occurred.
  const std::string& production() const { return production_; }

 private:
  int line_;
  int column_;
  std::string production_;
};

/// The EBNF of the term language, one production per line.
const std::string& term_grammar();

Term parse_term(std::string_view text);

/// Parses every `spec NAME { ... }` block of a specification file.
std::vector<RecSpec> parse_spec_file(std::string_view text);

/// Convenience for files holding exactly one specification.
RecSpec parse_spec(std::string_view text);

/// Minimal-parenthesis rendering; parse_term(format_term(t)) == t.
std::string format_term(const Term& t);

/// As format_term, but references to `spec` print as bare variables.
std::string format_term_in(const Term& t, const std::string& spec);

std::string format_spec(const RecSpec& spec);

std::string format_atoms(const AtomSet& atoms);

}  // namespace gamealg
