#include <gtest/gtest.h>

#include <map>
#include <set>

#include "gamealg/fairness.hpp"
#include "gamealg/random.hpp"
#include "gamealg/syntax.hpp"

using namespace gamealg;

namespace {

RecSpec S(const char* text) { return parse_spec(text); }

std::vector<std::vector<std::string>> var_sets(const std::vector<Cluster>& cs) {
  std::vector<std::vector<std::string>> out;
  for (const auto& c : cs) out.push_back(c.vars);
  return out;
}

std::map<std::string, LinearBody> bodies_of(const RecSpec& s) {
  std::map<std::string, LinearBody> out;
  for (auto& [v, b] : classify_spec(s).linear_bodies) out.emplace(v, *b);
  return out;
}

// Mutual reachability by transitive closure over hidden-or-idle summands.
std::vector<std::set<std::string>> oracle_clusters(const RecSpec& s, const AtomSet& hide) {
  const auto vars = s.variables();
  const auto bodies = bodies_of(s);
  const std::size_t n = vars.size();
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i) idx[vars[i]] = i;
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    reach[i][i] = true;
    for (const Summand& m : bodies.at(vars[i]).summands) {
      if (m.target && m.all_moves_in(hide)) reach[i][idx[*m.target]] = true;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
      }
    }
  }
  std::vector<std::set<std::string>> out;
  std::vector<bool> done(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (done[i]) continue;
    std::set<std::string> c;
    for (std::size_t j = 0; j < n; ++j) {
      if (reach[i][j] && reach[j][i]) {
        c.insert(vars[j]);
        done[j] = true;
      }
    }
    out.push_back(c);
  }
  return out;
}

bool is_exit(const Summand& m, const AtomSet& hide, const Cluster& c) {
  return !m.target || !m.all_moves_in(hide) || !c.contains(*m.target);
}

// Each produced exit is a summand of a member and meets the exit clauses;
// each member summand meeting them is produced.
void revalidate_exits(const RecSpec& s, const AtomSet& hide, const Cluster& c, const std::vector<Exit>& ex) {
  const auto bodies = bodies_of(s);
  auto key = [](const Summand& m) { return std::make_pair(m.sorted_moves(), m.target); };
  std::set<decltype(key(Summand{}))> produced;
  for (const Exit& e : ex) {
    ASSERT_TRUE(c.contains(e.owner));
    EXPECT_TRUE(is_exit(e.summand, hide, c));
    bool found = false;
    for (const Summand& m : bodies.at(e.owner).summands) found |= key(m) == key(e.summand);
    EXPECT_TRUE(found) << e.owner;
    EXPECT_TRUE(produced.insert(key(e.summand)).second) << "duplicate exit";
  }
  for (const auto& v : c.vars) {
    for (const Summand& m : bodies.at(v).summands) {
      if (is_exit(m, hide, c)) EXPECT_TRUE(produced.count(key(m))) << format_spec(s);
    }
  }
}

// Moves of a summand that stay visible under the hide set.
std::vector<LiteralOrIdle> visible_moves(const Summand& m, const AtomSet& hide) {
  std::vector<LiteralOrIdle> out;
  for (const auto& l : m.sorted_moves()) {
    if (!l.idle && !hide.count(l.atom)) out.push_back(l);
  }
  return out;
}

// Index of an exit whose visible label no other exit shares, when no exit
// is entirely hidden.
std::optional<std::size_t> droppable_exit(const std::vector<Exit>& ex, const AtomSet& hide) {
  if (ex.size() < 2) return std::nullopt;
  for (const Exit& e : ex) {
    if (e.summand.all_moves_in(hide)) return std::nullopt;
  }
  for (std::size_t i = 0; i < ex.size(); ++i) {
    bool unique = true;
    for (std::size_t j = 0; j < ex.size(); ++j) {
      unique &= i == j || visible_moves(ex[i].summand, hide) != visible_moves(ex[j].summand, hide);
    }
    if (unique) return i;
  }
  return std::nullopt;
}

struct SweepResult {
  int applicable = 0;
  int verified = 0;
  int controls = 0;
  int controls_rejected = 0;
};

SweepResult sweep(std::uint64_t seed, int specs, const SpecGen& g, SemanticsMode mode) {
  SweepResult out;
  BuildOptions o;
  o.mode = mode;
  for (int i = 0; i < specs; ++i) {
    Rng rng = make_rng(seed, i);
    const RecSpec s = random_linear_spec(rng, g);
    const AtomSet hide = random_hide(rng, g.atoms);
    const std::string x = s.variables()[pick(rng, s.equations.size())];
    CfarEquation eq;
    try {
      eq = apply_cfar(s, hide, x);
    } catch (const Error&) {
      continue;
    }
    ++out.applicable;
    const CfarVerdict v = verify_equation(s, eq, o);
    out.verified += v.weak;
    EXPECT_TRUE(v.weak) << format_spec(s) << format_term(eq.lhs) << " = " << format_term(eq.rhs) << "\n"
                        << v.distinguisher;
    if (const auto d = droppable_exit(eq.exits, hide)) {
      CfarEquation mutated = eq;
      mutated.exits.erase(mutated.exits.begin() + static_cast<std::ptrdiff_t>(*d));
      mutated.rhs = cfar_rhs(s, hide, mutated.exits, eq.flavor);
      ++out.controls;
      const bool weak = verify_equation(s, mutated, o).weak;
      out.controls_rejected += !weak;
      EXPECT_FALSE(weak) << format_spec(s) << format_term(mutated.rhs);
    }
  }
  return out;
}

const char* kTwoVar = "spec E { X = a . Y + c ; Y = a . X + d ; }";

}  // namespace

TEST(Clusters, Examples) {
  const RecSpec e = S(kTwoVar);
  EXPECT_EQ(var_sets(clusters(e, {"a"})), (std::vector<std::vector<std::string>>{{"X", "Y"}}));
  EXPECT_EQ(var_sets(clusters(e, {})), (std::vector<std::vector<std::string>>{{"X"}, {"Y"}}));
  EXPECT_THROW(clusters(S("spec U { X = iota . X ; }"), {}), Error);
  EXPECT_THROW(clusters(S("spec N { X = a . X . b + c ; }"), {"a"}), Error);
  // Idle steps count as internal whatever the hide set.
  EXPECT_EQ(var_sets(clusters(S("spec G { X = iota . Y + b ; Y = a . X ; }"), {"a"})),
            (std::vector<std::vector<std::string>>{{"X", "Y"}}));
}

TEST(Clusters, MatchTransitiveClosure) {
  SpecGen g;
  g.max_vars = 8;
  g.idle_weight = 3;
  int nontrivial = 0;
  for (int i = 0; i < 400; ++i) {
    Rng rng = make_rng(61, i);
    const RecSpec s = random_linear_spec(rng, g);
    const AtomSet hide = i % 5 == 0 ? AtomSet{} : random_hide(rng, g.atoms);
    const auto cs = clusters(s, hide);
    std::vector<std::set<std::string>> got;
    for (const auto& c : cs) {
      got.emplace_back(c.vars.begin(), c.vars.end());
      EXPECT_EQ(c.hide, hide);
      nontrivial += c.vars.size() > 1;
    }
    EXPECT_EQ(got, oracle_clusters(s, hide)) << format_spec(s);
  }
  EXPECT_GT(nontrivial, 50);
}

TEST(Exits, Examples) {
  const RecSpec e = S(kTwoVar);
  const auto cs = clusters(e, {"a"});
  const auto ex = exits(e, {"a"}, cs[0]);
  ASSERT_EQ(ex.size(), 2u);
  EXPECT_EQ(ex[0].owner, "X");
  EXPECT_EQ(format_term(ex[0].summand.to_term("E")), "c");
  EXPECT_EQ(ex[1].owner, "Y");
  EXPECT_EQ(format_term(ex[1].summand.to_term("E")), "d");
  EXPECT_EQ(format_cluster(e, {"a"}, cs[0]), "{X, Y} exits: c, d");

  const RecSpec loop = S("spec L { X = a . X ; }");
  EXPECT_TRUE(exits(loop, {"a"}, clusters(loop, {"a"})[0]).empty());

  // A bundle with one visible move leaves the cluster even when its target
  // is inside.
  const RecSpec b = S("spec B { X = (a || b) . Z + a . Z ; Z = a . X + c ; }");
  const auto bc = clusters(b, {"a"});
  ASSERT_EQ(bc.size(), 1u);
  const auto bex = exits(b, {"a"}, bc[0]);
  ASSERT_EQ(bex.size(), 2u);
  EXPECT_EQ(format_term(bex[0].summand.to_term("B")), "a || b . <Z|B>");
}

TEST(Exits, RevalidatedAgainstDefinition) {
  SpecGen g;
  g.max_vars = 6;
  g.idle_weight = 3;
  for (int i = 0; i < 300; ++i) {
    Rng rng = make_rng(62, i);
    const RecSpec s = random_linear_spec(rng, g);
    const AtomSet hide = random_hide(rng, g.atoms);
    for (const auto& c : clusters(s, hide)) revalidate_exits(s, hide, c, exits(s, hide, c));
  }
}

TEST(Cfar, WorkedInstances) {
  const RecSpec e = S(kTwoVar);
  const CfarEquation eq = apply_cfar(e, {"a"}, "X");
  EXPECT_EQ(format_term(eq.lhs), "iota . abs{a}(<X|E>)");
  EXPECT_EQ(format_term(eq.rhs), "iota . abs{a}(c + d)");
  EXPECT_TRUE(verify_cfar(e, {"a"}, "X").weak);
  EXPECT_TRUE(verify_cfar(e, {"a"}, "Y").weak);

  const RecSpec f = S("spec F { X = a . X + b ; }");
  EXPECT_EQ(format_term(apply_cfar(f, {"a"}, "X").rhs), "iota . abs{a}(b)");
  const CfarVerdict v = verify_cfar(f, {"a"}, "X");
  EXPECT_TRUE(v.weak);
  EXPECT_TRUE(v.branching);

  EXPECT_THROW(apply_cfar(S("spec L { X = a . X ; }"), {"a"}, "X"), Error);
  EXPECT_THROW(apply_cfar(e, {"a"}, "Q"), Error);
}

TEST(Cfar, DroppedExitIsRejected) {
  const RecSpec e = S(kTwoVar);
  CfarEquation eq = apply_cfar(e, {"a"}, "X");
  eq.exits.pop_back();
  eq.rhs = cfar_rhs(e, {"a"}, eq.exits, eq.flavor);
  EXPECT_EQ(format_term(eq.rhs), "iota . abs{a}(c)");
  const CfarVerdict v = verify_equation(e, eq);
  EXPECT_FALSE(v.weak);
  EXPECT_FALSE(v.distinguisher.empty());
}

TEST(Cfar, RandomUniformFlavorLiteral) {
  SpecGen g;
  g.uniform_flavor = true;
  g.idle_weight = 2;
  const SweepResult r = sweep(63, 300, g, SemanticsMode::Literal);
  EXPECT_GE(r.applicable, 50);
  EXPECT_EQ(r.verified, r.applicable);
  EXPECT_GE(r.controls, 20);
  EXPECT_EQ(r.controls_rejected, r.controls);
}

TEST(Cfar, RandomMixedFlavorPermissive) {
  SpecGen g;
  g.idle_weight = 2;
  const SweepResult r = sweep(64, 300, g, SemanticsMode::Permissive);
  EXPECT_GE(r.applicable, 50);
  EXPECT_EQ(r.verified, r.applicable);
  EXPECT_EQ(r.controls_rejected, r.controls);
}
