#include "gamealg/term_ops.hpp"

#include <algorithm>
#include <vector>

#include "gamealg/spec.hpp"

namespace gamealg {

const char* to_string(System s) { return s == System::BAG ? "BAG" : "ACG"; }

namespace {

Term map_children(const Term& t, Term (*f)(const Term&)) {
  if (t.arity() == 0) return t;
  std::vector<Term> kids;
  kids.reserve(t.arity());
  bool changed = false;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    Term c = t.child(i);
    Term m = f(c);
    changed = changed || m.node() != c.node();
    kids.push_back(std::move(m));
  }
  return changed ? t.with_children(kids) : t;
}

bool is_basic_leaf(const Term& t) {
  return t.is_literal() || (t.is(Kind::Dual) && t.body().is(Kind::Idle));
}

Term flip(const Term& u) {
  switch (u.kind()) {
    case Kind::Atom:
    case Kind::Rec:
      return Term::dual(u);
    case Kind::Idle:
      return u;
    case Kind::Dual:
      return u.body();
    case Kind::Join:
      return Term::meet(flip(u.left()), flip(u.right()));
    case Kind::Meet:
      return Term::join(flip(u.left()), flip(u.right()));
    case Kind::Comp:
      return Term::comp(flip(u.left()), flip(u.right()));
    case Kind::Par:
      return Term::par(flip(u.left()), flip(u.right()));
    case Kind::Abs:
      return Term::abs(u.hide(), flip(u.body()));
  }
  return u;
}

}  // namespace

Term ac_canonicalize(const Term& t) {
  Term c = map_children(t, &ac_canonicalize);
  if (!c.is_choice()) return c;
  auto ops = choice_operands(c, c.player());
  std::sort(ops.begin(), ops.end());
  return fold_choice(c.player(), ops);
}

bool is_guard(const Term& t, System system) {
  if (is_basic_leaf(t)) return true;
  if (system == System::ACG && t.is(Kind::Par)) {
    return is_guard(t.left(), system) && is_guard(t.right(), system);
  }
  return false;
}

bool is_basic(const Term& t, System system) {
  if (is_basic_leaf(t)) return true;
  switch (t.kind()) {
    case Kind::Comp:
      return is_guard(t.left(), system) && is_basic(t.right(), system);
    case Kind::Join:
    case Kind::Meet:
      return is_basic(t.left(), system) && is_basic(t.right(), system);
    case Kind::Par:
      return system == System::ACG && is_basic(t.left(), system) && is_basic(t.right(), system);
    default:
      return false;
  }
}

Term rename_to_idle(const Term& t, const AtomSet& hidden) {
  if (hidden.empty()) return t;
  if (t.is(Kind::Atom)) return hidden.count(t.name()) ? Term::idle() : t;
  if (t.arity() == 0) return t;
  std::vector<Term> kids;
  bool changed = false;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    Term c = t.child(i);
    Term m = rename_to_idle(c, hidden);
    changed = changed || m.node() != c.node();
    kids.push_back(std::move(m));
  }
  return changed ? t.with_children(kids) : t;
}

Term expand_abstractions(const Term& t) {
  Term c = map_children(t, &expand_abstractions);
  if (c.is(Kind::Abs)) return rename_to_idle(c.body(), c.hide());
  return c;
}

Term push_duals(const Term& t) {
  if (t.is(Kind::Dual)) return flip(push_duals(t.body()));
  return map_children(t, &push_duals);
}

}  // namespace gamealg
