#include "gamealg/lts.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "gamealg/syntax.hpp"
#include "gamealg/term_ops.hpp"

namespace gamealg {

Label Label::move(Player p, std::vector<std::string> atoms) {
  if (atoms.empty()) throw Error("a move label needs at least one atom");
  std::sort(atoms.begin(), atoms.end());
  return Label{false, p, std::move(atoms)};
}

std::string Label::str() const {
  if (silent) return "tau";
  std::string s = std::to_string(index(player)) + ":{";
  for (std::size_t i = 0; i < moves.size(); ++i) s += (i ? "," : "") + moves[i];
  return s + "}";
}

std::vector<std::vector<Transition>> Lts::out_edges() const {
  std::vector<std::vector<Transition>> out(num_states());
  for (const auto& tr : transitions) out[tr.source].push_back(tr);
  return out;
}

const char* to_string(SemanticsMode m) { return m == SemanticsMode::Literal ? "literal" : "permissive"; }

namespace {

void collect_spec_names(const Term& t, std::set<std::string>& out) {
  if (t.is(Kind::Rec)) out.insert(t.spec());
  for (std::size_t i = 0; i < t.arity(); ++i) collect_spec_names(t.child(i), out);
}

void check_vars(const Term& t, const SpecEnv& specs) {
  if (t.is(Kind::Rec)) {
    const RecSpec& s = specs.at(t.spec());
    if (!s.binds(t.name())) {
      throw Error("variable " + t.name() + " is not bound by specification " + t.spec());
    }
  }
  for (std::size_t i = 0; i < t.arity(); ++i) check_vars(t.child(i), specs);
}

bool step_less(const Step& a, const Step& b) {
  if (a.label != b.label) return a.label < b.label;
  if (a.target.has_value() != b.target.has_value()) return !a.target.has_value();
  return a.target && *a.target < *b.target;
}

bool step_equal(const Step& a, const Step& b) {
  return a.label == b.label && a.target.has_value() == b.target.has_value() &&
         (!a.target || *a.target == *b.target);
}

struct Generator {
  const SpecEnv& specs;
  const BuildOptions& opts;
  bool truncated = false;

  void steps(const Term& t, std::size_t depth, std::vector<Step>& out) {
    switch (t.kind()) {
      case Kind::Idle:
        out.push_back({Label::tau(), std::nullopt});
        return;
      case Kind::Atom:
        out.push_back({Label::move(Player::One, {t.name()}), std::nullopt});
        return;
      case Kind::Dual: {
        const Term b = t.body();
        if (b.is(Kind::Atom)) {
          out.push_back({Label::move(Player::Two, {b.name()}), std::nullopt});
          return;
        }
        // Dual of a recursion reference: the body's moves with roles swapped.
        std::vector<Step> inner;
        steps(b, depth, inner);
        for (auto& s : inner) {
          if (!s.label.silent) s.label.player = other(s.label.player);
          if (s.target) s.target = push_duals(Term::dual(*s.target));
          out.push_back(std::move(s));
        }
        return;
      }
      case Kind::Join:
      case Kind::Meet: {
        std::vector<Step> inner;
        steps(t.left(), depth, inner);
        steps(t.right(), depth, inner);
        for (auto& s : inner) {
          if (opts.mode == SemanticsMode::Literal && !s.label.silent && s.label.player != t.player()) continue;
          out.push_back(std::move(s));
        }
        return;
      }
      case Kind::Comp: {
        std::vector<Step> inner;
        steps(t.left(), depth, inner);
        for (auto& s : inner) {
          s.target = s.target ? Term::comp(*s.target, t.right()) : t.right();
          out.push_back(std::move(s));
        }
        return;
      }
      case Kind::Par: {
        std::vector<Step> l;
        std::vector<Step> r;
        steps(t.left(), depth, l);
        steps(t.right(), depth, r);
        for (const auto& x : l) {
          for (const auto& y : r) {
            Label lab;
            if (x.label.silent) {
              lab = y.label;
            } else if (y.label.silent) {
              lab = x.label;
            } else if (x.label.player == y.label.player) {
              std::vector<std::string> m = x.label.moves;
              m.insert(m.end(), y.label.moves.begin(), y.label.moves.end());
              lab = Label::move(x.label.player, std::move(m));
            } else {
              continue;
            }
            std::optional<Term> target;
            if (x.target && y.target) {
              target = Term::par(*x.target, *y.target);
            } else if (x.target) {
              target = x.target;
            } else if (y.target) {
              target = y.target;
            }
            out.push_back({std::move(lab), std::move(target)});
          }
        }
        return;
      }
      case Kind::Abs: {
        std::vector<Step> inner;
        steps(t.body(), depth, inner);
        for (auto& s : inner) {
          if (!s.label.silent) {
            std::vector<std::string> kept;
            for (const auto& a : s.label.moves) {
              if (!t.hide().count(a)) kept.push_back(a);
            }
            s.label = kept.empty() ? Label::tau() : Label::move(s.label.player, std::move(kept));
          }
          if (s.target) s.target = Term::abs(t.hide(), *s.target);
          out.push_back(std::move(s));
        }
        return;
      }
      case Kind::Rec: {
        if (depth >= opts.unfold_depth) {
          truncated = true;
          return;
        }
        const RecSpec& spec = specs.at(t.spec());
        steps(push_duals(spec.rhs(t.name())), depth + 1, out);
        return;
      }
    }
  }
};

constexpr std::size_t kDone = std::numeric_limits<std::size_t>::max();

Lts finish(const std::vector<std::string>& names, std::vector<Transition> raw, bool truncated) {
  Lts l;
  l.state_names = names;
  l.terminal = names.size();
  l.state_names.push_back("✓");
  for (auto& tr : raw) {
    if (tr.target == kDone) tr.target = l.terminal;
  }
  l.transitions = std::move(raw);
  l.truncated = truncated;
  return l;
}

}  // namespace

void check_specs(const Term& t, const SpecEnv& specs) {
  std::set<std::string> todo;
  collect_spec_names(t, todo);
  std::set<std::string> seen;
  while (!todo.empty()) {
    std::string name = *todo.begin();
    todo.erase(todo.begin());
    if (!seen.insert(name).second) continue;
    const RecSpec* s = specs.find(name);
    if (s == nullptr) throw Error("unknown specification " + name);
    check_bound(*s);
    if (!classify_spec(*s).is_guarded) throw Error("specification " + name + " is unguarded");
    for (const auto& [var, rhs] : s->equations) collect_spec_names(rhs, todo);
  }
  check_vars(t, specs);
}

std::vector<Step> successors(const Term& state, const SpecEnv& specs, const BuildOptions& opts,
                             bool* truncated) {
  Generator g{specs, opts};
  std::vector<Step> out;
  g.steps(state, 0, out);
  std::sort(out.begin(), out.end(), step_less);
  out.erase(std::unique(out.begin(), out.end(), step_equal), out.end());
  if (truncated != nullptr && g.truncated) *truncated = true;
  return out;
}

Lts build_lts(const Term& t, const SpecEnv& specs, const BuildOptions& opts) {
  check_specs(t, specs);
  const Term init = push_duals(t);
  std::unordered_map<Term, std::size_t, TermHash> ids;
  std::vector<Term> order{init};
  ids.emplace(init, 0);
  std::vector<Transition> raw;
  bool truncated = false;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Term state = order[i];
    for (auto& s : successors(state, specs, opts, &truncated)) {
      std::size_t target = kDone;
      if (s.target) {
        auto it = ids.find(*s.target);
        if (it != ids.end()) {
          target = it->second;
        } else if (order.size() >= opts.max_states) {
          truncated = true;
          continue;
        } else {
          target = order.size();
          ids.emplace(*s.target, target);
          order.push_back(*s.target);
        }
      }
      raw.push_back({i, std::move(s.label), target});
    }
  }
  std::vector<std::string> names;
  names.reserve(order.size());
  for (const auto& s : order) names.push_back(format_term(s));
  return finish(names, std::move(raw), truncated);
}

// ---- parallel-free engine ------------------------------------------------

namespace {

struct BagMove {
  Label label;
  std::optional<Term> next;
};

std::vector<BagMove> bag_moves(const Term& t, SemanticsMode mode) {
  std::vector<BagMove> out;
  if (t.is(Kind::Idle)) {
    out.push_back({Label::tau(), std::nullopt});
  } else if (t.is(Kind::Atom)) {
    out.push_back({Label::move(Player::One, {t.name()}), std::nullopt});
  } else if (t.is(Kind::Dual) && t.body().is(Kind::Atom)) {
    out.push_back({Label::move(Player::Two, {t.body().name()}), std::nullopt});
  } else if (t.is_choice()) {
    for (const Term& side : {t.left(), t.right()}) {
      for (auto& m : bag_moves(side, mode)) {
        const bool owned = m.label.silent || m.label.player == t.player();
        if (owned || mode == SemanticsMode::Permissive) out.push_back(std::move(m));
      }
    }
  } else if (t.is(Kind::Comp)) {
    for (auto& m : bag_moves(t.left(), mode)) {
      out.push_back({m.label, m.next ? Term::comp(*m.next, t.right()) : t.right()});
    }
  } else {
    throw Error("term is outside the parallel-free fragment: " + format_term(t));
  }
  return out;
}

}  // namespace

Lts build_lts_bag(const Term& t, SemanticsMode mode) {
  if (!in_bag_fragment(t)) throw Error("term is outside the parallel-free fragment: " + format_term(t));
  const Term init = push_duals(t);
  std::map<Term, std::size_t> ids{{init, 0}};
  std::vector<Term> order{init};
  std::set<Transition> edges;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (auto& m : bag_moves(order[i], mode)) {
      std::size_t target = kDone;
      if (m.next) {
        auto [it, fresh] = ids.emplace(*m.next, order.size());
        if (fresh) {
          order.push_back(*m.next);
          stack.push_back(it->second);
        }
        target = it->second;
      }
      edges.insert({i, m.label, target});
    }
  }
  std::vector<std::string> names;
  for (const auto& s : order) names.push_back(format_term(s));
  return finish(names, {edges.begin(), edges.end()}, false);
}

// ---- linearization ---------------------------------------------------------

RecSpec linearize(const Term& t, const SpecEnv& specs, const BuildOptions& opts, const std::string& name) {
  const Lts l = build_lts(t, specs, opts);
  if (l.truncated) throw Error("transition system is truncated; cannot linearize");
  auto var = [](std::size_t i) { return "X" + std::to_string(i + 1); };
  const auto out = l.out_edges();
  std::vector<std::pair<std::string, LinearBody>> bodies;
  for (std::size_t s = 0; s < l.num_states(); ++s) {
    if (s == l.terminal) continue;
    if (out[s].empty()) throw Error("state " + l.state_names[s] + " has no transitions; cannot linearize");
    LinearBody body;
    std::optional<Player> flavor;
    for (const auto& tr : out[s]) {
      Summand sm;
      if (tr.label.silent) {
        sm.moves.push_back(LiteralOrIdle::iota());
      } else {
        for (const auto& a : tr.label.moves) sm.moves.push_back(LiteralOrIdle::literal(a, tr.label.player));
        if (flavor && *flavor != tr.label.player && opts.mode == SemanticsMode::Literal) {
          throw Error("state " + l.state_names[s] + " offers moves of both players; cannot linearize in literal mode");
        }
        if (!flavor) flavor = tr.label.player;
      }
      if (tr.target != l.terminal) sm.target = var(tr.target);
      body.summands.push_back(std::move(sm));
    }
    body.flavor = flavor.value_or(Player::One);
    bodies.emplace_back(var(s), std::move(body));
  }
  RecSpec spec = make_linear_spec(name, bodies);
  if (!classify_spec(spec).is_guarded) throw Error("transition system has a silent cycle; cannot linearize");
  return spec;
}

// ---- isomorphism -------------------------------------------------------------

namespace {

using EdgeSet = std::set<std::tuple<std::size_t, Label, std::size_t>>;

EdgeSet edge_set(const Lts& l) {
  EdgeSet e;
  for (const auto& tr : l.transitions) e.emplace(tr.source, tr.label, tr.target);
  return e;
}

// Joint colour refinement of both systems.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> refine_colours(const Lts& a, const Lts& b) {
  using Sig = std::tuple<std::size_t, std::vector<std::pair<Label, std::size_t>>,
                         std::vector<std::pair<Label, std::size_t>>>;
  std::vector<std::size_t> ca(a.num_states(), 0);
  std::vector<std::size_t> cb(b.num_states(), 0);
  auto seed = [](const Lts& l, std::vector<std::size_t>& c) {
    for (std::size_t s = 0; s < l.num_states(); ++s) c[s] = (s == l.initial ? 1 : 0) + (s == l.terminal ? 2 : 0);
  };
  seed(a, ca);
  seed(b, cb);
  std::size_t classes = 0;
  for (;;) {
    std::map<Sig, std::size_t> ids;
    auto sigs = [&](const Lts& l, const std::vector<std::size_t>& c) {
      std::vector<Sig> out(l.num_states());
      for (std::size_t s = 0; s < l.num_states(); ++s) std::get<0>(out[s]) = c[s];
      for (const auto& tr : l.transitions) {
        std::get<1>(out[tr.source]).emplace_back(tr.label, c[tr.target]);
        std::get<2>(out[tr.target]).emplace_back(tr.label, c[tr.source]);
      }
      for (auto& s : out) {
        std::sort(std::get<1>(s).begin(), std::get<1>(s).end());
        std::sort(std::get<2>(s).begin(), std::get<2>(s).end());
      }
      return out;
    };
    auto sa = sigs(a, ca);
    auto sb = sigs(b, cb);
    for (const auto& s : sa) ids.emplace(s, 0);
    for (const auto& s : sb) ids.emplace(s, 0);
    std::size_t n = 0;
    for (auto& [sig, id] : ids) id = n++;
    for (std::size_t s = 0; s < sa.size(); ++s) ca[s] = ids.at(sa[s]);
    for (std::size_t s = 0; s < sb.size(); ++s) cb[s] = ids.at(sb[s]);
    if (n == classes) break;
    classes = n;
  }
  return {ca, cb};
}

}  // namespace

bool lts_isomorphic(const Lts& a, const Lts& b) {
  if (a.num_states() != b.num_states() || a.transitions.size() != b.transitions.size()) return false;
  const EdgeSet ea = edge_set(a);
  const EdgeSet eb = edge_set(b);
  if (ea.size() != eb.size()) return false;
  auto [ca, cb] = refine_colours(a, b);
  {
    std::vector<std::size_t> ha = ca;
    std::vector<std::size_t> hb = cb;
    std::sort(ha.begin(), ha.end());
    std::sort(hb.begin(), hb.end());
    if (ha != hb) return false;
  }
  const std::size_t n = a.num_states();
  const std::size_t none = kDone;
  std::vector<std::size_t> fwd(n, none);
  std::vector<std::size_t> bwd(n, none);
  const auto out_a = a.out_edges();
  const auto out_b = b.out_edges();
  std::vector<std::vector<Transition>> in_a(n);
  std::vector<std::vector<Transition>> in_b(n);
  for (const auto& tr : a.transitions) in_a[tr.target].push_back(tr);
  for (const auto& tr : b.transitions) in_b[tr.target].push_back(tr);

  auto consistent = [&](std::size_t u, std::size_t v) {
    for (const auto& tr : out_a[u]) {
      if (fwd[tr.target] != none && !eb.count({v, tr.label, fwd[tr.target]})) return false;
    }
    for (const auto& tr : in_a[u]) {
      if (fwd[tr.source] != none && !eb.count({fwd[tr.source], tr.label, v})) return false;
    }
    for (const auto& tr : out_b[v]) {
      if (bwd[tr.target] != none && !ea.count({u, tr.label, bwd[tr.target]})) return false;
    }
    for (const auto& tr : in_b[v]) {
      if (bwd[tr.source] != none && !ea.count({bwd[tr.source], tr.label, u})) return false;
    }
    return true;
  };

  // Assign states of a in breadth-first order so neighbours constrain early.
  std::vector<std::size_t> order;
  {
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> q;
    for (std::size_t root : {a.initial, a.terminal}) {
      if (!seen[root]) {
        seen[root] = true;
        q.push_back(root);
      }
    }
    for (std::size_t s = 0;; ++s) {
      while (!q.empty()) {
        std::size_t u = q.front();
        q.pop_front();
        order.push_back(u);
        for (const auto& tr : out_a[u]) {
          if (!seen[tr.target]) {
            seen[tr.target] = true;
            q.push_back(tr.target);
          }
        }
        for (const auto& tr : in_a[u]) {
          if (!seen[tr.source]) {
            seen[tr.source] = true;
            q.push_back(tr.source);
          }
        }
      }
      while (s < n && seen[s]) ++s;
      if (s >= n) break;
      seen[s] = true;
      q.push_back(s);
    }
  }

  std::function<bool(std::size_t)> assign = [&](std::size_t k) {
    if (k == order.size()) return true;
    const std::size_t u = order[k];
    for (std::size_t v = 0; v < n; ++v) {
      if (bwd[v] != none || cb[v] != ca[u]) continue;
      if ((u == a.initial) != (v == b.initial) || (u == a.terminal) != (v == b.terminal)) continue;
      if (!consistent(u, v)) continue;
      fwd[u] = v;
      bwd[v] = u;
      if (assign(k + 1)) return true;
      fwd[u] = none;
      bwd[v] = none;
    }
    return false;
  };
  return assign(0);
}

// ---- export --------------------------------------------------------------------

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string export_lts(const Lts& l, ExportFormat format) {
  std::ostringstream os;
  if (format == ExportFormat::Aut) {
    os << "des (" << l.initial << "," << l.transitions.size() << "," << l.num_states() << ")\n";
    for (const auto& tr : l.transitions) {
      os << "(" << tr.source << "," << quoted(tr.label.str()) << "," << tr.target << ")\n";
    }
    return os.str();
  }
  os << "digraph lts {\n";
  os << "  start [shape=point];\n";
  for (std::size_t s = 0; s < l.num_states(); ++s) {
    os << "  s" << s << " [label=" << quoted(l.state_names[s])
       << ", shape=" << (s == l.terminal ? "doublecircle" : "circle") << "];\n";
  }
  os << "  start -> s" << l.initial << ";\n";
  for (const auto& tr : l.transitions) {
    os << "  s" << tr.source << " -> s" << tr.target << " [label=" << quoted(tr.label.str()) << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace gamealg
