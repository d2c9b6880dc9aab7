#include "gamealg/random.hpp"

#include <algorithm>
#include <set>

namespace gamealg {

Rng make_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(a), hi(a), lo(b), hi(b)};
  return Rng(seq);
}

namespace {

Term leaf(Rng& rng, const TermGen& g) {
  const std::size_t r = pick(rng, 10);
  const Term a = Term::atom(g.atoms[pick(rng, g.atoms.size())]);
  if (r >= 8 && g.idle) return Term::idle();
  if (r >= 6 && g.dual) return Term::dual(a);
  return a;
}

Term gen_term(Rng& rng, const TermGen& g, int depth) {
  if (depth <= 0 || pick(rng, 4) == 0) return leaf(rng, g);
  std::vector<Kind> ops;
  if (g.join) ops.push_back(Kind::Join);
  if (g.meet) ops.push_back(Kind::Meet);
  if (g.comp) ops.push_back(Kind::Comp);
  if (g.dual) ops.push_back(Kind::Dual);
  if (g.par) ops.push_back(Kind::Par);
  if (g.abs) ops.push_back(Kind::Abs);
  if (ops.empty()) return leaf(rng, g);
  const Kind k = ops[pick(rng, ops.size())];
  switch (k) {
    case Kind::Dual:
      return Term::dual(gen_term(rng, g, depth - 1));
    case Kind::Abs: {
      AtomSet hide = random_hide(rng, g.atoms);
      return Term::abs(std::move(hide), gen_term(rng, g, depth - 1));
    }
    default: {
      Term l = gen_term(rng, g, depth - 1);
      Term r = gen_term(rng, g, depth - 1);
      switch (k) {
        case Kind::Join: return Term::join(l, r);
        case Kind::Meet: return Term::meet(l, r);
        case Kind::Comp: return Term::comp(l, r);
        default: return Term::par(l, r);
      }
    }
  }
}

}  // namespace

Term random_term(Rng& rng, const TermGen& gen) { return gen_term(rng, gen, gen.max_depth); }

AtomSet random_hide(Rng& rng, const std::vector<std::string>& atoms) {
  AtomSet hide;
  for (const auto& a : atoms) {
    if (pick(rng, 2) == 0) hide.insert(a);
  }
  if (hide.empty()) hide.insert(atoms[pick(rng, atoms.size())]);
  return hide;
}

namespace {

bool uses_hide(const Term& t) {
  if (t.is(Kind::Abs) && Pattern::is_hide_var(t.hide())) return true;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (uses_hide(t.child(i))) return true;
  }
  return false;
}

}  // namespace

Bindings random_bindings(Rng& rng, const Pattern& lhs, const Pattern& rhs, SideCondition side,
                         const TermGen& gen) {
  Bindings b;
  std::set<std::string> vars = lhs.metavariables();
  for (const auto& v : rhs.metavariables()) vars.insert(v);
  if (uses_hide(lhs.term()) || uses_hide(rhs.term())) b.hide = random_hide(rng, gen.atoms);
  for (const auto& v : vars) {
    if (!Pattern::is_guard_var(v)) {
      b.terms[v] = random_term(rng, gen);
      continue;
    }
    std::vector<std::string> pool;
    for (const auto& a : gen.atoms) {
      const bool hidden = b.hide && b.hide->count(a);
      if (side == SideCondition::AtomHidden && !hidden) continue;
      if (side == SideCondition::AtomNotHidden && hidden) continue;
      pool.push_back(a);
    }
    if (pool.empty()) {
      // Every atom is hidden: release one so the side condition can hold.
      const std::string a = *b.hide->begin();
      b.hide->erase(a);
      if (b.hide->empty()) b.hide->insert(gen.atoms.back() == a ? gen.atoms.front() : gen.atoms.back());
      pool.push_back(a);
    }
    b.terms[v] = Term::atom(pool[pick(rng, pool.size())]);
  }
  return b;
}

RecSpec random_linear_spec(Rng& rng, const SpecGen& gen, const std::string& name) {
  for (;;) {
    const std::size_t n = 1 + pick(rng, gen.max_vars);
    auto var = [](std::size_t i) { return "X" + std::to_string(i + 1); };
    std::vector<std::pair<std::string, LinearBody>> bodies;
    const Player shared = pick(rng, 2) == 0 ? Player::One : Player::Two;
    for (std::size_t v = 0; v < n; ++v) {
      LinearBody body;
      body.flavor = gen.uniform_flavor ? shared : pick(rng, 2) == 0 ? Player::One : Player::Two;
      const std::size_t k = 1 + pick(rng, gen.max_summands);
      for (std::size_t s = 0; s < k; ++s) {
        Summand sm;
        const std::size_t width = 1 + pick(rng, gen.max_bundle);
        for (std::size_t m = 0; m < width; ++m) {
          if (static_cast<int>(pick(rng, 10)) < gen.idle_weight) {
            sm.moves.push_back(LiteralOrIdle::iota());
          } else {
            sm.moves.push_back(LiteralOrIdle::literal(gen.atoms[pick(rng, gen.atoms.size())], body.flavor));
          }
        }
        const std::size_t t = pick(rng, n + 1);
        if (t < n) sm.target = var(t);
        body.summands.push_back(std::move(sm));
      }
      bodies.emplace_back(var(v), std::move(body));
    }
    RecSpec spec = make_linear_spec(name, bodies);
    if (classify_spec(spec).is_guarded) return spec;
  }
}

Lts random_lts(Rng& rng, const LtsGen& gen) {
  const std::size_t n = 1 + pick(rng, gen.max_states - 1);
  Lts l;
  for (std::size_t s = 0; s < n; ++s) l.state_names.push_back("s" + std::to_string(s));
  l.state_names.push_back("✓");
  l.initial = 0;
  l.terminal = n;
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t k = pick(rng, gen.max_out + 1);
    for (std::size_t e = 0; e < k; ++e) {
      l.transitions.push_back({s, gen.labels[pick(rng, gen.labels.size())], pick(rng, n + 1)});
    }
  }
  std::sort(l.transitions.begin(), l.transitions.end());
  l.transitions.erase(std::unique(l.transitions.begin(), l.transitions.end()), l.transitions.end());
  return l;
}

Lts split_state(Rng& rng, const Lts& l) {
  if (l.terminal == 0) return l;
  const std::size_t v = pick(rng, l.terminal);
  const std::size_t w = l.terminal;  // the copy takes the old terminal index
  Lts out;
  out.state_names = l.state_names;
  out.state_names.insert(out.state_names.begin() + static_cast<std::ptrdiff_t>(w), l.state_names[v] + "'");
  out.initial = l.initial;
  out.terminal = l.terminal + 1;
  auto remap = [&](std::size_t s) { return s == l.terminal ? out.terminal : s; };
  for (const auto& tr : l.transitions) {
    std::size_t target = remap(tr.target);
    if (tr.target == v && pick(rng, 2) == 0) target = w;
    out.transitions.push_back({tr.source, tr.label, target});
    if (tr.source == v) out.transitions.push_back({w, tr.label, remap(tr.target)});
  }
  std::sort(out.transitions.begin(), out.transitions.end());
  out.transitions.erase(std::unique(out.transitions.begin(), out.transitions.end()), out.transitions.end());
  return out;
}

}  // namespace gamealg
