#include "gamealg/pattern.hpp"

#include <functional>

#include "gamealg/syntax.hpp"

namespace gamealg {

namespace {

bool is_bundle_guard(const Term& t) {
  if (t.is(Kind::Atom)) return true;
  if (t.is(Kind::Dual)) return t.body().is(Kind::Atom);
  if (t.is(Kind::Par)) return is_bundle_guard(t.left()) && is_bundle_guard(t.right());
  return false;
}

bool match_at(const Term& p, const Term& s, Bindings& b) {
  if (p.is(Kind::Atom) && (Pattern::is_term_var(p.name()) || Pattern::is_guard_var(p.name()))) {
    if (Pattern::is_guard_var(p.name()) && !is_bundle_guard(s)) return false;
    auto [it, fresh] = b.terms.emplace(p.name(), s);
    return fresh || it->second == s;
  }
  if (p.kind() != s.kind()) return false;
  switch (p.kind()) {
    case Kind::Atom:
      return p.name() == s.name();
    case Kind::Rec:
      return p.name() == s.name() && p.spec() == s.spec();
    case Kind::Abs:
      if (Pattern::is_hide_var(p.hide())) {
        if (b.hide && *b.hide != s.hide()) return false;
        b.hide = s.hide();
      } else if (p.hide() != s.hide()) {
        return false;
      }
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < p.arity(); ++i) {
    if (!match_at(p.child(i), s.child(i), b)) return false;
  }
  return true;
}

Term inst(const Term& p, const Bindings& b) {
  if (p.is(Kind::Atom) && (Pattern::is_term_var(p.name()) || Pattern::is_guard_var(p.name()))) {
    auto it = b.terms.find(p.name());
    if (it == b.terms.end()) throw Error("pattern metavariable " + p.name() + " is unbound");
    return it->second;
  }
  if (p.arity() == 0) return p;
  std::vector<Term> kids;
  kids.reserve(p.arity());
  for (std::size_t i = 0; i < p.arity(); ++i) kids.push_back(inst(p.child(i), b));
  if (p.is(Kind::Abs) && Pattern::is_hide_var(p.hide())) {
    if (!b.hide) throw Error("pattern hide set is unbound");
    return Term::abs(*b.hide, kids[0]);
  }
  return p.with_children(kids);
}

}  // namespace

Pattern::Pattern(const std::string& text) : term_(parse_term(text)) {}

bool Pattern::is_term_var(const std::string& name) {
  return name == "x" || name == "y" || name == "z";
}

bool Pattern::is_guard_var(const std::string& name) { return name == "ga" || name == "gb"; }

bool Pattern::is_hide_var(const AtomSet& hide) { return hide.size() == 1 && *hide.begin() == "hide"; }

std::string Pattern::text() const { return format_term(term_); }

bool Pattern::match(const Term& subject, Bindings& b) const { return match_at(term_, subject, b); }

std::optional<Bindings> Pattern::match(const Term& subject) const {
  Bindings b;
  if (!match_at(term_, subject, b)) return std::nullopt;
  return b;
}

Term Pattern::instantiate(const Bindings& b) const { return inst(term_, b); }

std::set<std::string> Pattern::metavariables() const {
  std::set<std::string> out;
  std::function<void(const Term&)> walk = [&](const Term& t) {
    if (t.is(Kind::Atom) && (is_term_var(t.name()) || is_guard_var(t.name()))) out.insert(t.name());
    for (std::size_t i = 0; i < t.arity(); ++i) walk(t.child(i));
  };
  walk(term_);
  return out;
}

}  // namespace gamealg
