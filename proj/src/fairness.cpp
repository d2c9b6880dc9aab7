#include "gamealg/fairness.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "gamealg/equivalence.hpp"
#include "gamealg/syntax.hpp"

namespace gamealg {

bool Cluster::contains(const std::string& var) const {
  return std::find(vars.begin(), vars.end(), var) != vars.end();
}

namespace {

std::map<std::string, LinearBody> linear_bodies(const RecSpec& spec) {
  check_bound(spec);
  const SpecClassification c = classify_spec(spec);
  if (!c.is_linear) throw Error("specification " + spec.name + " is not linear");
  if (!c.is_guarded) throw Error("specification " + spec.name + " is unguarded");
  std::map<std::string, LinearBody> out;
  for (const auto& [var, body] : c.linear_bodies) out.emplace(var, *body);
  return out;
}

using SummandKey = std::pair<std::vector<LiteralOrIdle>, std::optional<std::string>>;

SummandKey key_of(const Summand& s) { return {s.sorted_moves(), s.target}; }

std::string format_exit(const Exit& e, const std::string& spec) {
  return format_term_in(e.summand.to_term(spec), spec);
}

// A one-summand equation has no choice operator and so no flavor of its
// own; it borrows one from the cluster, then from the exits' literals.
Player cfar_flavor(const std::map<std::string, LinearBody>& bodies, const Cluster& c, const std::string& var,
                   const std::vector<Exit>& ex) {
  if (bodies.at(var).summands.size() > 1) return bodies.at(var).flavor;
  for (const auto& v : c.vars) {
    if (bodies.at(v).summands.size() > 1) return bodies.at(v).flavor;
  }
  for (const auto& e : ex) {
    for (const auto& m : e.summand.moves) {
      if (!m.idle) return m.player;
    }
  }
  return Player::One;
}

}  // namespace

std::vector<Cluster> clusters(const RecSpec& spec, const AtomSet& hide) {
  const auto bodies = linear_bodies(spec);
  const std::vector<std::string> vars = spec.variables();
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < vars.size(); ++i) pos[vars[i]] = i;
  std::vector<std::vector<std::size_t>> adj(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    for (const auto& s : bodies.at(vars[i]).summands) {
      if (s.target && s.all_moves_in(hide)) adj[i].push_back(pos.at(*s.target));
    }
  }
  // Tarjan's algorithm.
  const std::size_t none = vars.size();
  std::vector<std::size_t> index(vars.size(), none);
  std::vector<std::size_t> low(vars.size(), 0);
  std::vector<bool> on_stack(vars.size(), false);
  std::vector<std::size_t> stack;
  std::size_t counter = 0;
  std::vector<std::vector<std::size_t>> comps;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : adj[v]) {
      if (index[w] == none) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> comp;
      std::size_t w = none;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
  };
  for (std::size_t v = 0; v < vars.size(); ++v) {
    if (index[v] == none) visit(v);
  }
  std::sort(comps.begin(), comps.end());
  std::vector<Cluster> out;
  for (const auto& comp : comps) {
    Cluster c;
    c.hide = hide;
    for (std::size_t v : comp) c.vars.push_back(vars[v]);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Exit> exits(const RecSpec& spec, const AtomSet& hide, const Cluster& cluster) {
  const auto bodies = linear_bodies(spec);
  std::vector<Exit> out;
  std::vector<SummandKey> seen;
  for (const auto& var : cluster.vars) {
    std::vector<Summand> mine;
    for (const auto& s : bodies.at(var).summands) {
      const bool leaves = !s.target || !s.all_moves_in(hide) || !cluster.contains(*s.target);
      if (leaves) mine.push_back(s);
    }
    std::sort(mine.begin(), mine.end(), [](const Summand& a, const Summand& b) { return key_of(a) < key_of(b); });
    for (auto& s : mine) {
      SummandKey k = key_of(s);
      if (std::find(seen.begin(), seen.end(), k) != seen.end()) continue;
      seen.push_back(std::move(k));
      out.push_back({std::move(s), var});
    }
  }
  return out;
}

std::string format_cluster(const RecSpec& spec, const AtomSet& hide, const Cluster& cluster) {
  std::string out = "{";
  for (std::size_t i = 0; i < cluster.vars.size(); ++i) out += (i ? ", " : "") + cluster.vars[i];
  out += "} exits: ";
  const auto ex = exits(spec, hide, cluster);
  if (ex.empty()) return out + "none";
  for (std::size_t i = 0; i < ex.size(); ++i) out += (i ? ", " : "") + format_exit(ex[i], spec.name);
  return out;
}

Term cfar_rhs(const RecSpec& spec, const AtomSet& hide, const std::vector<Exit>& ex, Player flavor) {
  if (ex.empty()) throw Error("a CFAR right-hand side needs at least one exit");
  std::vector<Term> parts;
  for (const auto& e : ex) parts.push_back(e.summand.to_term(spec.name));
  return Term::comp(Term::idle(), Term::abs(hide, fold_choice(flavor, parts)));
}

CfarEquation apply_cfar(const RecSpec& spec, const AtomSet& hide, const std::string& var) {
  if (!spec.binds(var)) throw Error("variable " + var + " is not bound by specification " + spec.name);
  const auto bodies = linear_bodies(spec);
  for (const auto& c : clusters(spec, hide)) {
    if (!c.contains(var)) continue;
    CfarEquation eq;
    eq.exits = exits(spec, hide, c);
    if (eq.exits.empty()) throw Error("CFAR is not applicable: the cluster of " + var + " has no exits");
    eq.flavor = cfar_flavor(bodies, c, var, eq.exits);
    eq.lhs = Term::comp(Term::idle(), Term::abs(hide, Term::rec(var, spec.name)));
    eq.rhs = cfar_rhs(spec, hide, eq.exits, eq.flavor);
    return eq;
  }
  throw Error("variable " + var + " is in no cluster");
}

CfarVerdict verify_equation(const RecSpec& spec, const CfarEquation& eq, const BuildOptions& opts) {
  SpecEnv env;
  env.add(spec);
  const Lts l = build_lts(eq.lhs, env, opts);
  const Lts r = build_lts(eq.rhs, env, opts);
  CfarVerdict v;
  v.equation = eq;
  const EquivResult weak = check_equiv(l, r, EquivKind::Weak);
  v.weak = weak.equivalent;
  v.branching = check_equiv(l, r, EquivKind::Branching).equivalent;
  v.distinguisher = weak.distinguisher;
  return v;
}

CfarVerdict verify_cfar(const RecSpec& spec, const AtomSet& hide, const std::string& var, const BuildOptions& opts) {
  return verify_equation(spec, apply_cfar(spec, hide, var), opts);
}

}  // namespace gamealg
