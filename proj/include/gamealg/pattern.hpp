// Term patterns over metavariables.
//
// Patterns are written in the ordinary term syntax.  The atoms x, y and z
// stand for arbitrary terms, ga and gb for guards (an atom, a dualized atom,
// or a parallel bundle of those), and an abstraction written abs{hide}(...)
// stands for an arbitrary hide set.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "gamealg/term.hpp"

namespace gamealg {

struct Bindings {
  std::map<std::string, Term> terms;
  std::optional<AtomSet> hide;
};

class Pattern {
 public:
  explicit Pattern(const std::string& text);
  explicit Pattern(Term t) : term_(std::move(t)) {}

  static bool is_term_var(const std::string& name);
  static bool is_guard_var(const std::string& name);
  static bool is_hide_var(const AtomSet& hide);

  const Term& term() const { return term_; }
  std::string text() const;

  /// Syntactic matching; repeated metavariables must bind equal terms.
  bool match(const Term& subject, Bindings& b) const;
  std::optional<Bindings> match(const Term& subject) const;

  /// Replaces metavariables by their bindings.  Throws if one is unbound.
  Term instantiate(const Bindings& b) const;

  std::set<std::string> metavariables() const;

 private:
  Term term_;
};

}  // namespace gamealg
