#include "gamealg/rewrite.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "gamealg/syntax.hpp"

namespace gamealg {

const char* to_string(Phase p) { return p == Phase::DualPush ? "DualPush" : "Main"; }

namespace {

RewriteRule rule(std::string id, const char* lhs, const char* rhs, Phase phase, bool acg_only = false,
                 bool enabled = true) {
  return RewriteRule{std::move(id), Pattern(lhs), Pattern(rhs), phase, acg_only, enabled};
}

std::vector<RewriteRule> build_table() {
  const Phase D = Phase::DualPush;
  const Phase M = Phase::Main;
  return {
      rule("RG6", "(x^d)^d", "x", D),
      rule("RG7a", "(x + y)^d", "x^d & y^d", D),
      rule("RG7b", "(x & y)^d", "x^d + y^d", D),
      rule("RG12", "iota^d", "iota", D),
      rule("G10r", "(x . y)^d", "x^d . y^d", D),
      rule("RCG9", "(x || y)^d", "x^d || y^d", D, true),

      rule("RG1a", "x + x", "x", M),
      rule("RG1b", "x & x", "x", M),
      rule("RG3a", "x + (y + z)", "(x + y) + z", M),
      rule("RG3b", "x & (y & z)", "(x & y) & z", M),
      rule("RG4a", "x + (x & y)", "x", M),
      rule("RG4b", "x & (x + y)", "x", M),
      rule("RG5a", "x + (y & z)", "(x + y) & (x + z)", M, false, false),
      rule("RG5b", "x & (y + z)", "x & y + x & z", M),
      rule("RG8", "(x . y) . z", "x . (y . z)", M),
      rule("RG9a", "(x + y) . z", "x . z + y . z", M),
      rule("RG9b", "(x & y) . z", "x . z & y . z", M),
      rule("RG10", "x^d . y^d", "(x . y)^d", M, false, false),
      rule("RG11a", "x . iota", "x", M),
      rule("RG11b", "iota . x", "x", M),
      rule("RCG1", "(x || y) || z", "x || (y || z)", M, true),
      rule("RCG2", "ga || (gb . y)", "(ga || gb) . y", M, true),
      rule("RCG3", "(ga . x) || gb", "(ga || gb) . x", M, true),
      rule("RCG4", "(ga . x) || (gb . y)", "(ga || gb) . (x || y)", M, true),
      rule("RCG5", "(x + y) || z", "x || z + y || z", M, true),
      rule("RCG6", "x || (y + z)", "x || y + x || z", M, true),
      rule("RCG7", "(x & y) || z", "x || z & y || z", M, true),
      rule("RCG8", "x || (y & z)", "x || y & x || z", M, true),
      rule("RCG10", "iota || x", "x", M, true),
      rule("RCG11", "x || iota", "x", M, true),
  };
}

using StepSink = std::function<void(const std::string&, const std::vector<std::size_t>&, const Term&)>;

constexpr std::size_t kMaxSteps = 5'000'000;
constexpr int kMaxRounds = 64;
constexpr std::size_t kMaxDnf = 20'000;

class PhaseRunner {
 public:
  PhaseRunner(System system, Phase phase, const StepSink* sink)
      : rules_(active_rules(system, phase)), sink_(sink) {}

  Term run(const Term& t) {
    path_.clear();
    return norm(t);
  }

 private:
  Term norm(const Term& t) {
    Term cur = t;
    for (;;) {
      if (normal_.count(cur.node())) return cur;
      if (cur.arity() > 0) {
        std::vector<Term> kids;
        kids.reserve(cur.arity());
        bool changed = false;
        for (std::size_t i = 0; i < cur.arity(); ++i) {
          path_.push_back(i);
          Term c = cur.child(i);
          Term n = norm(c);
          path_.pop_back();
          changed = changed || n.node() != c.node();
          kids.push_back(std::move(n));
        }
        if (changed) cur = cur.with_children(kids);
      }
      const RewriteRule* fired = nullptr;
      Term next;
      for (const RewriteRule* r : rules_) {
        if (auto b = r->lhs.match(cur)) {
          fired = r;
          next = r->rhs.instantiate(*b);
          break;
        }
      }
      if (fired == nullptr) {
        normal_.emplace(cur.node(), cur);
        return cur;
      }
      if (++steps_ > kMaxSteps) throw Error("rewrite step budget exhausted");
      if (sink_ != nullptr) (*sink_)(fired->id, path_, next);
      cur = next;
    }
  }

  std::vector<const RewriteRule*> rules_;
  const StepSink* sink_;
  std::vector<std::size_t> path_;
  std::unordered_map<const detail::Node*, Term> normal_;
  std::size_t steps_ = 0;
};

Term replace_at(const Term& t, const std::vector<std::size_t>& path, std::size_t i, const Term& sub) {
  if (i == path.size()) return sub;
  std::vector<Term> kids;
  for (std::size_t k = 0; k < t.arity(); ++k) {
    kids.push_back(k == path[i] ? replace_at(t.child(k), path, i + 1, sub) : t.child(k));
  }
  return t.with_children(kids);
}

// Join-of-meets form: each meet is a sorted set of generators, the outer
// list is an antichain under inclusion.
using MeetSet = std::vector<Term>;
using Dnf = std::vector<MeetSet>;

bool subset(const MeetSet& a, const MeetSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

Dnf reduce(Dnf d) {
  for (auto& m : d) {
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
  }
  std::sort(d.begin(), d.end(), [](const MeetSet& a, const MeetSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  d.erase(std::unique(d.begin(), d.end()), d.end());
  // Kept meets indexed by their least generator: a kept k can only absorb m
  // if k's least generator occurs in m.
  Dnf out;
  std::unordered_map<const detail::Node*, std::vector<std::size_t>> by_first;
  for (auto& m : d) {
    bool absorbed = false;
    for (std::size_t i = 0; i < m.size() && !absorbed; ++i) {
      auto it = by_first.find(m[i].node());
      if (it == by_first.end()) continue;
      absorbed = std::any_of(it->second.begin(), it->second.end(),
                             [&](std::size_t k) { return subset(out[k], m); });
    }
    if (absorbed) continue;
    by_first[m.front().node()].push_back(out.size());
    out.push_back(std::move(m));
  }
  return out;
}

// Memoized per node: hash-consing makes repeated subterms share nodes.
class Canonicalizer {
 public:
  Term canon(const Term& t) {
    if (auto it = canon_.find(t.node()); it != canon_.end()) return it->second;
    Term out;
    if (!t.is_choice()) {
      std::vector<Term> kids;
      for (std::size_t i = 0; i < t.arity(); ++i) kids.push_back(canon(t.child(i)));
      out = t.arity() ? t.with_children(kids) : t;
    } else {
      const Dnf& d = dnf(t);
      std::vector<Term> meets;
      meets.reserve(d.size());
      for (const auto& m : d) meets.push_back(fold_choice(Player::Two, m));
      std::sort(meets.begin(), meets.end());
      out = fold_choice(Player::One, meets);
    }
    canon_.emplace(t.node(), out);
    return out;
  }

 private:
  const Dnf& dnf(const Term& t) {
    if (auto it = dnf_.find(t.node()); it != dnf_.end()) return it->second;
    Dnf out;
    if (t.is(Kind::Join)) {
      out = dnf(t.left());
      const Dnf& b = dnf(t.right());
      out.insert(out.end(), b.begin(), b.end());
      if (out.size() > kMaxDnf) throw Error("lattice normal form exceeds size budget");
      out = reduce(std::move(out));
    } else if (t.is(Kind::Meet)) {
      const Dnf& a = dnf(t.left());
      const Dnf& b = dnf(t.right());
      if (a.size() * b.size() > kMaxDnf) throw Error("lattice normal form exceeds size budget");
      out.reserve(a.size() * b.size());
      for (const auto& x : a) {
        for (const auto& y : b) {
          MeetSet m = x;
          m.insert(m.end(), y.begin(), y.end());
          out.push_back(std::move(m));
        }
      }
      out = reduce(std::move(out));
    } else {
      out = {{canon(t)}};
    }
    return dnf_.emplace(t.node(), std::move(out)).first->second;
  }

  std::unordered_map<const detail::Node*, Term> canon_;
  std::unordered_map<const detail::Node*, Dnf> dnf_;
};

Term normalize_impl(const Term& t, System system, const StepSink* sink) {
  check_rewritable(t, system);
  PhaseRunner push(system, Phase::DualPush, sink);
  Term cur = push.run(t);
  for (int round = 0; round < kMaxRounds; ++round) {
    PhaseRunner main(system, Phase::Main, sink);
    cur = main.run(cur);
    Term canon = lattice_canonical(cur);
    PhaseRunner check(system, Phase::Main, nullptr);
    const bool settled = check.run(canon) == canon;
    if (sink != nullptr && canon != cur) (*sink)("ACI", {}, canon);
    if (settled) return canon;
    cur = canon;
  }
  throw Error("normalization did not stabilise after lattice canonicalization");
}

// ---- lexicographic path order ------------------------------------------

bool is_var(const Term& t) {
  return t.is(Kind::Atom) && (Pattern::is_term_var(t.name()) || Pattern::is_guard_var(t.name()));
}

bool occurs(const Term& v, const Term& s) {
  if (s == v) return true;
  for (std::size_t i = 0; i < s.arity(); ++i) {
    if (occurs(v, s.child(i))) return true;
  }
  return false;
}

int precedence(const Term& t) {
  switch (t.kind()) {
    case Kind::Idle: return 0;
    case Kind::Atom: return 1;
    case Kind::Join: return 2;
    case Kind::Meet: return 3;
    case Kind::Comp: return 4;
    case Kind::Par: return 5;
    case Kind::Dual: return 6;
    default: return -1;
  }
}

bool same_symbol(const Term& a, const Term& b) {
  return a.kind() == b.kind() && (!a.is(Kind::Atom) || a.name() == b.name());
}

bool symbol_greater(const Term& a, const Term& b) {
  int pa = precedence(a);
  int pb = precedence(b);
  if (pa != pb) return pa > pb;
  return a.is(Kind::Atom) && b.is(Kind::Atom) && a.name() > b.name();
}

bool right_to_left(const Term& t) { return t.is_choice(); }

}  // namespace

const std::vector<RewriteRule>& rule_table() {
  static const std::vector<RewriteRule> table = build_table();
  return table;
}

std::vector<const RewriteRule*> active_rules(System system, Phase phase) {
  std::vector<const RewriteRule*> out;
  for (const auto& r : rule_table()) {
    if (!r.enabled || r.phase != phase) continue;
    if (r.acg_only && system == System::BAG) continue;
    out.push_back(&r);
  }
  return out;
}

void check_rewritable(const Term& t, System system) {
  if (contains_kind(t, Kind::Rec)) throw Error("cannot rewrite an open term (recursion reference present)");
  if (contains_kind(t, Kind::Abs)) throw Error("cannot rewrite under abstraction");
  if (system == System::BAG && contains_kind(t, Kind::Par)) {
    throw Error("parallel composition is outside BAG; use the ACG system");
  }
}

Term run_phase(const Term& t, System system, Phase phase) {
  check_rewritable(t, system);
  PhaseRunner r(system, phase, nullptr);
  return r.run(t);
}

Term lattice_canonical(const Term& t) {
  Canonicalizer c;
  return c.canon(t);
}

Term normalize(const Term& t, System system) { return normalize_impl(t, system, nullptr); }

RewriteTrace rewrite_trace(const Term& t, System system) {
  RewriteTrace trace;
  trace.start = t;
  Term current = t;
  StepSink sink = [&](const std::string& id, const std::vector<std::size_t>& path, const Term& sub) {
    current = replace_at(current, path, 0, sub);
    trace.steps.push_back({id, path, current});
  };
  normalize_impl(t, system, &sink);
  return trace;
}

std::string format_trace(const RewriteTrace& trace) {
  std::ostringstream os;
  std::size_t k = 1;
  for (const auto& s : trace.steps) {
    os << "step " << k++ << ": " << s.rule << " at path [";
    for (std::size_t i = 0; i < s.path.size(); ++i) os << (i ? "," : "") << s.path[i];
    os << "]: " << format_term(s.after) << '\n';
  }
  return os.str();
}

bool eq_by_normal_form(const Term& a, const Term& b, System system) {
  return ac_canonicalize(normalize(a, system)) == ac_canonicalize(normalize(b, system));
}

bool lpo_greater(const Term& s, const Term& t) {
  if (is_var(s)) return false;
  if (is_var(t)) return s != t && occurs(t, s);
  for (std::size_t i = 0; i < s.arity(); ++i) {
    const Term si = s.child(i);
    if (si == t || lpo_greater(si, t)) return true;
  }
  auto dominates_args = [&] {
    for (std::size_t j = 0; j < t.arity(); ++j) {
      if (!lpo_greater(s, t.child(j))) return false;
    }
    return true;
  };
  if (symbol_greater(s, t)) return dominates_args();
  if (same_symbol(s, t) && s.arity() == t.arity()) {
    const std::size_t n = s.arity();
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = right_to_left(s) ? n - 1 - k : k;
      const Term si = s.child(i);
      const Term ti = t.child(i);
      if (si == ti) continue;
      return lpo_greater(si, ti) && dominates_args();
    }
  }
  return false;
}

std::vector<LpoVerdict> lpo_check(System system) {
  std::vector<LpoVerdict> out;
  for (const auto& r : rule_table()) {
    if (r.acg_only && system == System::BAG) continue;
    out.push_back({r.id, r.phase, r.enabled, lpo_greater(r.lhs.term(), r.rhs.term())});
  }
  return out;
}

}  // namespace gamealg
