#include <gtest/gtest.h>

#include <functional>
#include <iostream>

#include "gamealg/axioms.hpp"
#include "gamealg/board.hpp"
#include "gamealg/random.hpp"
#include "gamealg/rewrite.hpp"
#include "gamealg/syntax.hpp"
#include "gamealg/term_ops.hpp"

using namespace gamealg;

namespace {

Term T(const char* s) { return parse_term(s); }
std::string N(const char* s, System sys = System::BAG) { return format_term(normalize(T(s), sys)); }

Term subterm(const Term& t, const std::vector<std::size_t>& path) {
  Term cur = t;
  for (std::size_t i : path) cur = cur.child(i);
  return cur;
}

Term replace(const Term& t, const std::vector<std::size_t>& path, std::size_t depth, const Term& sub) {
  if (depth == path.size()) return sub;
  std::vector<Term> kids;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    kids.push_back(i == path[depth] ? replace(t.child(i), path, depth + 1, sub) : t.child(i));
  }
  return t.with_children(kids);
}

const RewriteRule& rule_by_id(const std::string& id) {
  for (const auto& r : rule_table()) {
    if (r.id == id) return r;
  }
  throw Error("no rule " + id);
}

// Replays one recorded step from scratch.
bool step_replays(const Term& before, const RewriteStep& s) {
  if (s.rule == "ACI") return s.path.empty() && lattice_canonical(before) == s.after;
  const RewriteRule& r = rule_by_id(s.rule);
  auto b = r.lhs.match(subterm(before, s.path));
  if (!b) return false;
  return replace(before, s.path, 0, r.rhs.instantiate(*b)) == s.after;
}

// Textbook LPO, written independently of the library.  Metavariables are
// the pattern variables; guard slots count as variables too.
int prec(const Term& t) {
  switch (t.kind()) {
    case Kind::Dual: return 6;
    case Kind::Par: return 5;
    case Kind::Comp: return 4;
    case Kind::Meet: return 3;
    case Kind::Join: return 2;
    case Kind::Atom: return 1;
    default: return 0;
  }
}
bool is_mv(const Term& t) {
  return t.is(Kind::Atom) && (Pattern::is_term_var(t.name()) || Pattern::is_guard_var(t.name()));
}
bool lpo_gt(const Term& s, const Term& t);
bool lpo_ge(const Term& s, const Term& t) { return s == t || lpo_gt(s, t); }
bool lpo_gt(const Term& s, const Term& t) {
  if (is_mv(s)) return false;
  if (is_mv(t)) {
    std::function<bool(const Term&)> occ = [&](const Term& u) {
      if (u == t) return true;
      for (std::size_t i = 0; i < u.arity(); ++i) {
        if (occ(u.child(i))) return true;
      }
      return false;
    };
    return s != t && occ(s);
  }
  for (std::size_t i = 0; i < s.arity(); ++i) {
    if (lpo_ge(s.child(i), t)) return true;
  }
  auto dominates = [&] {
    for (std::size_t j = 0; j < t.arity(); ++j) {
      if (!lpo_gt(s, t.child(j))) return false;
    }
    return true;
  };
  const int ps = prec(s);
  const int pt = prec(t);
  const bool same = s.kind() == t.kind() && (s.kind() != Kind::Atom || s.name() == t.name());
  if (!same) {
    const bool bigger = ps > pt || (ps == pt && s.is(Kind::Atom) && t.is(Kind::Atom) && s.name() > t.name());
    return bigger && dominates();
  }
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < s.arity(); ++i) order.push_back(i);
  if (s.is_choice()) std::reverse(order.begin(), order.end());
  for (std::size_t i : order) {
    if (s.child(i) == t.child(i)) continue;
    return lpo_gt(s.child(i), t.child(i)) && dominates();
  }
  return false;
}

// Outermost-first rewriting with the same rules: a second strategy for the
// confluence report.
std::optional<Term> outer_step(const Term& t, const std::vector<const RewriteRule*>& rules) {
  for (const auto* r : rules) {
    if (auto b = r->lhs.match(t)) return r->rhs.instantiate(*b);
  }
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (auto k = outer_step(t.child(i), rules)) {
      std::vector<Term> kids;
      for (std::size_t j = 0; j < t.arity(); ++j) kids.push_back(j == i ? *k : t.child(j));
      return t.with_children(kids);
    }
  }
  return std::nullopt;
}
Term outer_exhaust(Term t, System sys, Phase phase) {
  const auto rules = active_rules(sys, phase);
  while (auto n = outer_step(t, rules)) t = *n;
  return t;
}
Term outer_normalize(const Term& t, System sys) {
  Term cur = outer_exhaust(t, sys, Phase::DualPush);
  for (int round = 0; round < 64; ++round) {
    const Term c = lattice_canonical(outer_exhaust(cur, sys, Phase::Main));
    if (c == cur) break;
    cur = c;
  }
  return ac_canonicalize(cur);
}

}  // namespace

TEST(Normalize, Examples) {
  EXPECT_EQ(N("(a + b) . c"), "a . c + b . c");
  EXPECT_EQ(N("(a + b)^d"), "a^d & b^d");
  EXPECT_EQ(N("a . iota"), "a");
  EXPECT_EQ(N("(a . b)^d"), "a^d . b^d");
  EXPECT_EQ(N("iota^d"), "iota");
  EXPECT_EQ(N("(a || b) || c", System::ACG), "a || (b || c)");
  EXPECT_EQ(N("(a . b) || (c . d)", System::ACG), "a || c . b || d");
}

TEST(Normalize, Rejections) {
  EXPECT_THROW(normalize(T("a || b"), System::BAG), Error);
  EXPECT_THROW(normalize(T("abs{a}(a)"), System::ACG), Error);
  EXPECT_THROW(normalize(T("<X|E>"), System::ACG), Error);
}

TEST(Trace, Examples) {
  auto tr = rewrite_trace(T("(a^d)^d"), System::BAG);
  ASSERT_EQ(tr.steps.size(), 1u);
  EXPECT_EQ(tr.steps[0].rule, "RG6");
  EXPECT_EQ(tr.result(), T("a"));
  EXPECT_TRUE(rewrite_trace(T("a"), System::BAG).steps.empty());
  tr = rewrite_trace(T("(a || b) || c"), System::ACG);
  ASSERT_FALSE(tr.steps.empty());
  EXPECT_EQ(tr.steps[0].rule, "RCG1");
  EXPECT_EQ(format_term(tr.steps[0].after), "a || (b || c)");
  EXPECT_EQ(format_trace(rewrite_trace(T("(a + b) . c"), System::BAG)), "step 1: RG9a at path []: a . c + b . c\n");
}

TEST(Trace, EveryStepReplays) {
  TermGen gen;
  gen.max_depth = 4;
  for (int i = 0; i < 300; ++i) {
    Rng rng = make_rng(21, i);
    gen.par = i % 2;
    const System sys = gen.par ? System::ACG : System::BAG;
    const Term t = random_term(rng, gen);
    const RewriteTrace tr = rewrite_trace(t, sys);
    Term prev = tr.start;
    for (const auto& s : tr.steps) {
      ASSERT_TRUE(step_replays(prev, s)) << format_term(prev) << " --" << s.rule << "--> " << format_term(s.after);
      prev = s.after;
    }
    EXPECT_EQ(tr.result(), normalize(t, sys)) << format_term(t);
  }
}

TEST(Normalize, EliminationTerminationIdempotence) {
  TermGen gen;
  gen.atoms = {"a", "b", "c", "d"};
  for (int i = 0; i < 1500; ++i) {
    Rng rng = make_rng(22, i);
    gen.par = i % 3 == 0;
    gen.max_depth = gen.par ? 1 + static_cast<int>(pick(rng, 6)) : 2 + i % 7;
    const System sys = gen.par ? System::ACG : System::BAG;
    const Term t = random_term(rng, gen);
    const Term n = normalize(t, sys);
    EXPECT_TRUE(is_basic(n, sys)) << format_term(t);
    EXPECT_EQ(normalize(n, sys), n) << format_term(t);
    EXPECT_EQ(ac_canonicalize(n), n);
  }
}

TEST(Normalize, OversizedNormalFormIsReported) {
  // 2^16 meets in the lattice normal form.
  std::string t = "(x0 + y0)";
  for (int i = 1; i < 16; ++i) t += " & (x" + std::to_string(i) + " + y" + std::to_string(i) + ")";
  const Term big = parse_term("(" + t + ")");
  EXPECT_THROW(normalize(big, System::BAG), Error);
  EXPECT_NO_THROW(normalize(parse_term("(x0 + y0) & (x1 + y1) & (x2 + y2)"), System::BAG));
}

TEST(Normalize, NoRuleAppliesToNormalForms) {
  TermGen gen;
  gen.par = true;
  for (int i = 0; i < 300; ++i) {
    Rng rng = make_rng(23, i);
    const Term n = normalize(random_term(rng, gen), System::ACG);
    EXPECT_EQ(run_phase(n, System::ACG, Phase::DualPush), n);
    EXPECT_EQ(run_phase(n, System::ACG, Phase::Main), n);
  }
}

TEST(EqByNormalForm, Examples) {
  EXPECT_TRUE(eq_by_normal_form(T("a + b"), T("b + a"), System::BAG));
  EXPECT_TRUE(eq_by_normal_form(T("a & (a + b)"), T("a"), System::BAG));
  EXPECT_FALSE(eq_by_normal_form(T("a"), T("b"), System::BAG));
}

// Distributing a parallel over choices on both sides in different orders
// yields lattice-distinct normal forms, so CG7 and CG8 are not closed under
// normal-form comparison.  Every other law is.
TEST(EqByNormalForm, AxiomClosure) {
  const std::set<std::string> open{"CG7", "CG8"};
  for (const auto& ax : axiom_table()) {
    if (ax.table == AxiomTable::Abs) continue;
    const System sys = ax.table == AxiomTable::Acg ? System::ACG : System::BAG;
    TermGen gen;
    gen.max_depth = 2;
    gen.par = sys == System::ACG;
    const Pattern l(ax.lhs);
    const Pattern r(ax.rhs);
    int fails = 0;
    for (int i = 0; i < 100; ++i) {
      Rng rng = make_rng(24, i);
      const Bindings b = random_bindings(rng, l, r, ax.side, gen);
      fails += !eq_by_normal_form(l.instantiate(b), r.instantiate(b), sys);
    }
    if (open.count(ax.id)) {
      EXPECT_GT(fails, 0) << ax.id;
    } else {
      EXPECT_EQ(fails, 0) << ax.id;
    }
  }
  EXPECT_FALSE(eq_by_normal_form(T("(a & b) || (c + d)"), T("a || (c + d) & b || (c + d)"), System::ACG) &&
               eq_by_normal_form(T("(a & b) || (c + d)"), T("(a & b) || c + (a & b) || d"), System::ACG));
}

TEST(Lpo, Examples) {
  std::map<std::string, LpoVerdict> v;
  for (const auto& x : lpo_check(System::ACG)) v[x.rule] = x;
  EXPECT_TRUE(v.at("RG9a").holds);
  EXPECT_TRUE(v.at("RG6").holds);
  EXPECT_TRUE(v.at("RCG4").holds);
  EXPECT_FALSE(v.at("RG5a").enabled);
  EXPECT_FALSE(v.at("RG10").enabled);
  for (const auto& [id, x] : v) {
    if (x.enabled) EXPECT_TRUE(x.holds) << id;
  }
  EXPECT_EQ(lpo_check(System::BAG).size(), 19u);
}

TEST(Lpo, AgreesWithTextbookDefinition) {
  for (const auto& r : rule_table()) {
    EXPECT_EQ(lpo_greater(r.lhs.term(), r.rhs.term()), lpo_gt(r.lhs.term(), r.rhs.term())) << r.id;
  }
  TermGen gen;
  gen.atoms = {"x", "y", "a", "b"};
  gen.par = true;
  for (int i = 0; i < 3000; ++i) {
    Rng rng = make_rng(25, i);
    const Term s = random_term(rng, gen);
    const Term t = random_term(rng, gen);
    EXPECT_EQ(lpo_greater(s, t), lpo_gt(s, t)) << format_term(s) << " vs " << format_term(t);
  }
}

TEST(Confluence, StrategyReport) {
  TermGen gen;
  int bag_diff = 0;
  int acg_diff = 0;
  for (int i = 0; i < 400; ++i) {
    Rng rng = make_rng(26, i);
    gen.par = i % 2;
    const System sys = gen.par ? System::ACG : System::BAG;
    const Term t = random_term(rng, gen);
    const bool same = outer_normalize(t, sys) == ac_canonicalize(normalize(t, sys));
    (sys == System::BAG ? bag_diff : acg_diff) += !same;
  }
  std::cout << "outermost vs innermost normal forms differ: BAG " << bag_diff << "/200, ACG " << acg_diff
            << "/200\n";
  EXPECT_EQ(bag_diff, 0);
}

TEST(Coherence, RewriteStepsPreserveBoardOutcomes) {
  TermGen gen;
  int steps = 0;
  for (int i = 0; i < 60; ++i) {
    Rng rng = make_rng(27, i);
    const Term t = random_term(rng, gen);
    const RewriteTrace tr = rewrite_trace(t, System::BAG);
    for (int k = 0; k < 5; ++k) {
      const GameBoard b = random_board(1000 * i + k, 1 + pick(rng, 4), gen.atoms, {k % 2 == 0, k % 3 == 0});
      Outcome prev = eval_outcome(b, tr.start);
      for (const auto& s : tr.steps) {
        const Outcome next = eval_outcome(b, s.after);
        EXPECT_EQ(prev, next) << s.rule << " on " << format_term(t);
        prev = next;
        ++steps;
      }
    }
  }
  EXPECT_GT(steps, 100);
}
