#include "gamealg/spec.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace gamealg {

const Term* RecSpec::find(const std::string& var) const {
  for (const auto& [v, t] : equations) {
    if (v == var) return &t;
  }
  return nullptr;
}

const Term& RecSpec::rhs(const std::string& var) const {
  const Term* t = find(var);
  if (t == nullptr) throw Error("variable " + var + " is not bound by specification " + name);
  return *t;
}

std::vector<std::string> RecSpec::variables() const {
  std::vector<std::string> out;
  out.reserve(equations.size());
  for (const auto& eq : equations) out.push_back(eq.first);
  return out;
}

SpecEnv::SpecEnv(std::vector<RecSpec> specs) {
  for (auto& s : specs) add(std::move(s));
}

void SpecEnv::add(RecSpec spec) {
  std::string key = spec.name;
  specs_[key] = std::move(spec);
}

const RecSpec* SpecEnv::find(const std::string& name) const {
  auto it = specs_.find(name);
  return it == specs_.end() ? nullptr : &it->second;
}

const RecSpec& SpecEnv::at(const std::string& name) const {
  const RecSpec* s = find(name);
  if (s == nullptr) throw Error("unknown specification " + name);
  return *s;
}

Term LiteralOrIdle::to_term() const {
  if (idle) return Term::idle();
  Term a = Term::atom(atom);
  return player == Player::One ? a : Term::dual(a);
}

std::vector<LiteralOrIdle> Summand::sorted_moves() const {
  auto m = moves;
  std::sort(m.begin(), m.end());
  return m;
}

bool Summand::all_moves_in(const AtomSet& hidden) const {
  return std::all_of(moves.begin(), moves.end(), [&](const LiteralOrIdle& m) {
    return m.idle || hidden.count(m.atom) > 0;
  });
}

Term bundle_term(const std::vector<LiteralOrIdle>& moves) {
  if (moves.empty()) throw Error("empty move bundle");
  Term t = moves.back().to_term();
  for (auto it = moves.rbegin() + 1; it != moves.rend(); ++it) t = Term::par(it->to_term(), t);
  return t;
}

Term Summand::to_term(const std::string& spec) const {
  Term b = bundle_term(moves);
  return target ? Term::comp(b, Term::rec(*target, spec)) : b;
}

std::vector<Term> choice_operands(const Term& t, Player flavor) {
  std::vector<Term> out;
  std::function<void(const Term&)> walk = [&](const Term& u) {
    if (u.is_choice() && u.player() == flavor) {
      walk(u.left());
      walk(u.right());
    } else {
      out.push_back(u);
    }
  };
  walk(t);
  return out;
}

Term fold_choice(Player flavor, const std::vector<Term>& operands) {
  if (operands.empty()) throw Error("fold_choice: no operands");
  Term t = operands.front();
  for (std::size_t i = 1; i < operands.size(); ++i) t = Term::choice(flavor, t, operands[i]);
  return t;
}

namespace {

bool bundle_moves(const Term& t, std::vector<LiteralOrIdle>& out) {
  switch (t.kind()) {
    case Kind::Idle:
      out.push_back(LiteralOrIdle::iota());
      return true;
    case Kind::Atom:
      out.push_back(LiteralOrIdle::literal(t.name(), Player::One));
      return true;
    case Kind::Dual:
      if (!t.body().is(Kind::Atom)) return false;
      out.push_back(LiteralOrIdle::literal(t.body().name(), Player::Two));
      return true;
    case Kind::Par:
      return bundle_moves(t.left(), out) && bundle_moves(t.right(), out);
    default:
      return false;
  }
}

std::optional<Summand> extract_summand(const RecSpec& spec, const Term& t) {
  Summand s;
  if (t.is(Kind::Comp)) {
    const Term target = t.right();
    if (!target.is(Kind::Rec) || target.spec() != spec.name || !spec.binds(target.name())) {
      return std::nullopt;
    }
    if (!bundle_moves(t.left(), s.moves)) return std::nullopt;
    s.target = target.name();
    return s;
  }
  if (!bundle_moves(t, s.moves)) return std::nullopt;
  return s;
}

void collect_unbound(const RecSpec& spec, const Term& t, std::set<std::string>& out) {
  if (t.is(Kind::Rec) && t.spec() == spec.name && !spec.binds(t.name())) out.insert(t.name());
  for (std::size_t i = 0; i < t.arity(); ++i) collect_unbound(spec, t.child(i), out);
}

bool has_cycle(const std::map<std::string, std::set<std::string>>& graph) {
  // Three-colour DFS.
  std::map<std::string, int> colour;
  std::function<bool(const std::string&)> visit = [&](const std::string& v) {
    colour[v] = 1;
    auto it = graph.find(v);
    if (it != graph.end()) {
      for (const auto& w : it->second) {
        int c = colour[w];
        if (c == 1) return true;
        if (c == 0 && visit(w)) return true;
      }
    }
    colour[v] = 2;
    return false;
  };
  for (const auto& [v, _] : graph) {
    if (colour[v] == 0 && visit(v)) return true;
  }
  return false;
}

// Head-guard analysis for arbitrary right-hand sides.  `silent` tells whether
// a term may start with a silent step; `heads` collects the variables of the
// same spec whose behaviour is reachable without a preceding visible move.
struct HeadAnalysis {
  const RecSpec& spec;
  std::map<std::string, bool> var_silent;

  bool silent(const Term& t) const {
    switch (t.kind()) {
      case Kind::Idle:
        return true;
      case Kind::Atom:
        return false;
      case Kind::Dual:
      case Kind::Comp:
        return silent(t.left());
      case Kind::Join:
      case Kind::Meet:
        return silent(t.left()) || silent(t.right());
      case Kind::Par:
        return silent(t.left()) && silent(t.right());
      case Kind::Abs:
        return silent(t.body()) || !t.hide().empty();
      case Kind::Rec:
        if (t.spec() != spec.name) return true;
        {
          auto it = var_silent.find(t.name());
          return it != var_silent.end() && it->second;
        }
    }
    return true;
  }

  void heads(const Term& t, std::set<std::string>& out) const {
    switch (t.kind()) {
      case Kind::Idle:
      case Kind::Atom:
        return;
      case Kind::Rec:
        if (t.spec() == spec.name) out.insert(t.name());
        return;
      case Kind::Comp:
        heads(t.left(), out);
        if (silent(t.left())) heads(t.right(), out);
        return;
      default:
        for (std::size_t i = 0; i < t.arity(); ++i) heads(t.child(i), out);
    }
  }
};

bool head_guarded(const RecSpec& spec) {
  HeadAnalysis h{spec, {}};
  // Least fixpoint of "may start silently" over the variables.
  for (const auto& v : spec.variables()) h.var_silent[v] = false;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [v, rhs] : spec.equations) {
      if (!h.var_silent[v] && h.silent(rhs)) {
        h.var_silent[v] = true;
        changed = true;
      }
    }
  }
  std::map<std::string, std::set<std::string>> graph;
  for (const auto& [v, rhs] : spec.equations) h.heads(rhs, graph[v]);
  return !has_cycle(graph);
}

}  // namespace

std::optional<LinearBody> extract_linear_body(const RecSpec& spec, const Term& rhs) {
  LinearBody body;
  body.flavor = rhs.is_choice() ? rhs.player() : Player::One;
  for (const Term& op : choice_operands(rhs, body.flavor)) {
    auto s = extract_summand(spec, op);
    if (!s) return std::nullopt;
    body.summands.push_back(std::move(*s));
  }
  return body;
}

Term LinearBody::to_term(const std::string& spec) const {
  std::vector<Term> ops;
  ops.reserve(summands.size());
  for (const auto& s : summands) ops.push_back(s.to_term(spec));
  return fold_choice(flavor, ops);
}

void check_bound(const RecSpec& spec) {
  std::set<std::string> unbound;
  for (const auto& eq : spec.equations) collect_unbound(spec, eq.second, unbound);
  if (!unbound.empty()) {
    throw Error("unbound variable " + *unbound.begin() + " in specification " + spec.name);
  }
}

SpecClassification classify_spec(const RecSpec& spec) {
  check_bound(spec);
  SpecClassification c;
  c.is_linear = true;
  for (const auto& [v, rhs] : spec.equations) {
    auto body = extract_linear_body(spec, rhs);
    if (!body) c.is_linear = false;
    c.linear_bodies[v] = std::move(body);
  }
  if (c.is_linear) {
    // Guarded iff no cycle through summands whose moves are all idle.
    std::map<std::string, std::set<std::string>> graph;
    for (const auto& [v, body] : c.linear_bodies) {
      auto& edges = graph[v];
      for (const auto& s : body->summands) {
        if (s.target && s.all_moves_in({})) edges.insert(*s.target);
      }
    }
    c.is_guarded = !has_cycle(graph);
  } else {
    c.is_guarded = head_guarded(spec);
  }
  return c;
}

RecSpec make_linear_spec(const std::string& name,
                         const std::vector<std::pair<std::string, LinearBody>>& bodies) {
  RecSpec spec;
  spec.name = name;
  for (const auto& [v, body] : bodies) spec.equations.emplace_back(v, body.to_term(name));
  return spec;
}

}  // namespace gamealg
