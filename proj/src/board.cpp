#include "gamealg/board.hpp"

#include <json.hpp>
#include <sstream>

#include "gamealg/pattern.hpp"
#include "gamealg/syntax.hpp"
#include "gamealg/term_ops.hpp"

namespace gamealg {

using json = nlohmann::json;

void OutcomeRelation::mon_close(std::size_t nstates) {
  const StateSet subsets = 1U << nstates;
  for (auto& row : rows) {
    std::uint32_t closed = row;
    for (StateSet x = 0; x < subsets; ++x) {
      if (!((row >> x) & 1U)) continue;
      for (StateSet y = 0; y < subsets; ++y) {
        if ((x & y) == x) closed |= 1U << y;
      }
    }
    row = closed;
  }
}

const OutcomeRelation& GameBoard::relation(const std::string& atom, Player p) const {
  auto it = rho.find({atom, p});
  if (it == rho.end()) {
    throw Error("board has no outcome relation for atom " + atom + " and player " + std::to_string(index(p)));
  }
  return it->second;
}

std::string GameBoard::format_set(StateSet x) const {
  std::string out = "{";
  bool first = true;
  for (std::size_t s = 0; s < states.size(); ++s) {
    if ((x >> s) & 1U) {
      out += (first ? "" : ",") + states[s];
      first = false;
    }
  }
  return out + "}";
}

namespace {

std::size_t state_index(const GameBoard& b, const std::string& name) {
  for (std::size_t i = 0; i < b.states.size(); ++i) {
    if (b.states[i] == name) return i;
  }
  throw Error("unknown state " + name);
}

OutcomeRelation read_pairs(const GameBoard& b, const json& pairs) {
  OutcomeRelation r;
  r.rows.assign(b.size(), 0);
  if (!pairs.is_array()) throw Error("outcome pairs must be a list of [state, [states...]]");
  for (const auto& p : pairs) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_array()) {
      throw Error("outcome pair must be [state, [states...]]");
    }
    StateSet x = 0;
    for (const auto& t : p[1]) x |= 1U << state_index(b, t.get<std::string>());
    r.insert(state_index(b, p[0].get<std::string>()), x);
  }
  return r;
}

json write_pairs(const GameBoard& b, const OutcomeRelation& r) {
  json out = json::array();
  for (std::size_t s = 0; s < b.size(); ++s) {
    for (StateSet x = 0; x <= b.full(); ++x) {
      if (!r.contains(s, x)) continue;
      json set = json::array();
      for (std::size_t t = 0; t < b.size(); ++t) {
        if ((x >> t) & 1U) set.push_back(b.states[t]);
      }
      out.push_back(json::array({b.states[s], set}));
    }
  }
  return out;
}

std::set<std::string> board_atoms(const GameBoard& b) {
  std::set<std::string> out;
  for (const auto& [key, r] : b.rho) out.insert(key.first);
  return out;
}

std::string pair_text(const GameBoard& b, const std::string& atom, std::size_t s, StateSet x) {
  return "(" + atom + ", " + b.states[s] + ", " + b.format_set(x) + ")";
}

}  // namespace

GameBoard parse_board(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("board file is not valid JSON: ") + e.what());
  }
  GameBoard b;
  if (!j.contains("states") || !j["states"].is_array() || j["states"].empty()) {
    throw Error("board needs a nonempty \"states\" list");
  }
  for (const auto& s : j["states"]) b.states.push_back(s.get<std::string>());
  if (b.size() > kMaxBoardStates) throw Error("boards are limited to 5 states");
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      if (b.states[i] == b.states[k]) throw Error("duplicate state " + b.states[i]);
    }
  }
  if (j.contains("flags")) {
    b.flags.fin = j["flags"].value("fin", false);
    b.flags.det = j["flags"].value("det", false);
  }
  if (j.contains("atoms")) {
    for (const auto& [atom, spec] : j["atoms"].items()) {
      const bool close = spec.value("mon_close", false);
      for (Player p : {Player::One, Player::Two}) {
        const char* key = p == Player::One ? "p1" : "p2";
        OutcomeRelation r = spec.contains(key) ? read_pairs(b, spec[key]) : read_pairs(b, json::array());
        if (close) r.mon_close(b.size());
        b.rho[{atom, p}] = std::move(r);
      }
    }
  }
  const BoardReport report = validate_board(b);
  if (!report.con.ok) throw Error("CON violation: " + report.con.witness);
  return b;
}

std::string board_to_json(const GameBoard& b) {
  json j;
  j["states"] = b.states;
  j["atoms"] = json::object();
  for (const auto& atom : board_atoms(b)) {
    j["atoms"][atom]["p1"] = write_pairs(b, b.relation(atom, Player::One));
    j["atoms"][atom]["p2"] = write_pairs(b, b.relation(atom, Player::Two));
  }
  j["flags"] = {{"fin", b.flags.fin}, {"det", b.flags.det}};
  return j.dump();
}

BoardReport validate_board(const GameBoard& b) {
  BoardReport rep;
  const StateSet full = b.full();
  auto fail = [](ConditionCheck& c, std::string w) {
    if (c.ok) {
      c.ok = false;
      c.witness = std::move(w);
    }
  };
  for (const auto& [key, r] : b.rho) {
    for (std::size_t s = 0; s < b.size(); ++s) {
      for (StateSet x = 0; x <= full; ++x) {
        if (!r.contains(s, x)) continue;
        for (StateSet y = 0; y <= full; ++y) {
          if ((x & y) == x && !r.contains(s, y)) {
            fail(rep.mon, "player " + std::to_string(index(key.second)) + " " + pair_text(b, key.first, s, x) +
                              " present but superset " + b.format_set(y) + " missing");
          }
        }
      }
    }
  }
  if (b.flags.fin) rep.fin = ConditionCheck{};
  if (b.flags.det) rep.det = ConditionCheck{};
  for (const auto& atom : board_atoms(b)) {
    const auto& r1 = b.relation(atom, Player::One);
    const auto& r2 = b.relation(atom, Player::Two);
    for (std::size_t s = 0; s < b.size(); ++s) {
      for (StateSet x = 0; x <= full; ++x) {
        const StateSet rest = full & ~x;
        if (r1.contains(s, x) && r2.contains(s, rest)) {
          fail(rep.con, "player 1 " + pair_text(b, atom, s, x) + " and player 2 " + pair_text(b, atom, s, rest));
        }
        if (rep.det && r1.contains(s, x) == r2.contains(s, rest)) {
          fail(*rep.det, pair_text(b, atom, s, x) + ": player 1 " + (r1.contains(s, x) ? "wins" : "loses") +
                             " and player 2 " + (r2.contains(s, rest) ? "wins" : "loses") + " the complement");
        }
      }
      if (rep.fin) {
        if (!r1.contains(s, full)) fail(*rep.fin, "player 1 " + pair_text(b, atom, s, full) + " missing");
        if (!r2.contains(s, full)) fail(*rep.fin, "player 2 " + pair_text(b, atom, s, full) + " missing");
      }
    }
  }
  return rep;
}

namespace {

OutcomeRelation idle_relation(const GameBoard& b) {
  OutcomeRelation r;
  r.rows.assign(b.size(), 0);
  for (std::size_t s = 0; s < b.size(); ++s) {
    for (StateSet x = 0; x <= b.full(); ++x) {
      if ((x >> s) & 1U) r.insert(s, x);
    }
  }
  return r;
}

OutcomeRelation pointwise(const OutcomeRelation& a, const OutcomeRelation& b, bool uni) {
  OutcomeRelation r = a;
  for (std::size_t s = 0; s < r.rows.size(); ++s) r.rows[s] = uni ? a.rows[s] | b.rows[s] : a.rows[s] & b.rows[s];
  return r;
}

// (s, X) in G.H iff (s, {t : (t, X) in H}) in G.
OutcomeRelation compose(const GameBoard& b, const OutcomeRelation& g, const OutcomeRelation& h) {
  OutcomeRelation r;
  r.rows.assign(b.size(), 0);
  for (StateSet x = 0; x <= b.full(); ++x) {
    StateSet inner = 0;
    for (std::size_t t = 0; t < b.size(); ++t) {
      if (h.contains(t, x)) inner |= 1U << t;
    }
    for (std::size_t s = 0; s < b.size(); ++s) {
      if (g.contains(s, inner)) r.insert(s, x);
    }
  }
  return r;
}

}  // namespace

Outcome eval_outcome(const GameBoard& b, const Term& t) {
  switch (t.kind()) {
    case Kind::Idle: {
      OutcomeRelation r = idle_relation(b);
      return {r, r};
    }
    case Kind::Atom:
      return {b.relation(t.name(), Player::One), b.relation(t.name(), Player::Two)};
    case Kind::Dual: {
      Outcome o = eval_outcome(b, t.body());
      return {o.p2, o.p1};
    }
    case Kind::Join:
    case Kind::Meet: {
      const Outcome l = eval_outcome(b, t.left());
      const Outcome r = eval_outcome(b, t.right());
      const bool one_unions = t.is(Kind::Join);
      return {pointwise(l.p1, r.p1, one_unions), pointwise(l.p2, r.p2, !one_unions)};
    }
    case Kind::Comp: {
      const Outcome l = eval_outcome(b, t.left());
      const Outcome r = eval_outcome(b, t.right());
      return {compose(b, l.p1, r.p1), compose(b, l.p2, r.p2)};
    }
    case Kind::Par:
      throw Error("parallel composition has no board semantics");
    case Kind::Abs:
      throw Error("abstraction has no board semantics; rename hidden atoms to idle first");
    case Kind::Rec:
      throw Error("recursion has no board semantics");
  }
  throw Error("unknown term kind");
}

InclusionResult check_inclusion(const GameBoard& b, const Term& t1, const Term& t2) {
  const Outcome o1 = eval_outcome(b, t1);
  const Outcome o2 = eval_outcome(b, t2);
  auto subset = [](const OutcomeRelation& x, const OutcomeRelation& y) {
    for (std::size_t s = 0; s < x.rows.size(); ++s) {
      if ((x.rows[s] & ~y.rows[s]) != 0) return false;
    }
    return true;
  };
  InclusionResult r;
  r.incl1 = subset(o1.p1, o2.p1);
  r.incl2 = subset(o1.p2, o2.p2);
  r.included = r.incl1 && r.incl2;
  r.equivalent = o1 == o2;
  return r;
}

InclusionResult check_weak_board(const GameBoard& b, const Term& t1, const AtomSet& i1, const Term& t2,
                                 const AtomSet& i2) {
  return check_inclusion(b, rename_to_idle(t1, i1), rename_to_idle(t2, i2));
}

GameBoard random_board(std::uint64_t seed, std::size_t nstates, const std::vector<std::string>& atoms,
                       BoardFlags flags) {
  if (nstates < 1 || nstates > kMaxBoardStates) throw Error("random boards have 1 to 5 states");
  Rng rng = make_rng(seed, nstates);
  GameBoard b;
  for (std::size_t s = 0; s < nstates; ++s) b.states.push_back("s" + std::to_string(s + 1));
  b.flags = flags;
  const StateSet full = b.full();
  const std::size_t subsets = std::size_t{1} << nstates;
  for (const auto& atom : atoms) {
    OutcomeRelation r1;
    r1.rows.assign(nstates, 0);
    for (std::size_t s = 0; s < nstates; ++s) {
      const std::size_t k = pick(rng, 3);
      for (std::size_t i = 0; i < k; ++i) {
        StateSet x = static_cast<StateSet>(pick(rng, subsets));
        if (flags.fin && x == 0) x = full;
        r1.insert(s, x);
      }
      if (flags.fin) r1.insert(s, full);
    }
    r1.mon_close(nstates);
    // Largest player-2 relation consistent with player 1.
    OutcomeRelation r2;
    r2.rows.assign(nstates, 0);
    for (std::size_t s = 0; s < nstates; ++s) {
      for (StateSet y = 0; y <= full; ++y) {
        if (!r1.contains(s, full & ~y)) r2.insert(s, y);
      }
    }
    if (!flags.det && pick(rng, 2) == 0) {
      // Thin it out: keep a few generators and close upward again.
      OutcomeRelation sub;
      sub.rows.assign(nstates, 0);
      for (std::size_t s = 0; s < nstates; ++s) {
        for (StateSet y = 0; y <= full; ++y) {
          if (r2.contains(s, y) && pick(rng, 3) == 0) sub.insert(s, y);
        }
        if (flags.fin) sub.insert(s, full);
      }
      sub.mon_close(nstates);
      r2 = sub;
    }
    b.rho[{atom, Player::One}] = r1;
    b.rho[{atom, Player::Two}] = r2;
  }
  return b;
}

std::string ValidityReport::render() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < trials.size(); ++k) {
    const auto& t = trials[k];
    os << "trial " << k << ": |S|=" << t.nstates << " " << (t.ok ? "ok" : "COUNTEREXAMPLE")
       << (t.structural ? " (structural)" : "") << "  " << t.lhs << "  vs  " << t.rhs << "\n";
  }
  if (counterexample) {
    os << identity << ": counterexample in trial " << *counterexample << " on board "
       << board_to_json(*counterexample_board) << "\n";
  } else {
    os << identity << ": no counterexample in " << trials.size() << " trials\n";
  }
  return os.str();
}

ValidityReport check_validity(const std::string& lhs, const std::string& rhs, SideCondition side,
                              const ValidityOptions& opts) {
  const Pattern pl(lhs);
  const Pattern pr(rhs);
  ValidityReport rep;
  rep.identity = pl.text() + " = " + pr.text();
  TermGen gen;
  gen.atoms = opts.atoms;
  gen.max_depth = opts.depth;
  for (std::size_t k = 0; k < opts.trials; ++k) {
    Rng rng = make_rng(opts.seed, k);
    const std::size_t n = 1 + pick(rng, opts.max_states);
    BoardFlags flags;
    flags.fin = pick(rng, 2) == 0;
    flags.det = pick(rng, 2) == 0;
    GameBoard board = random_board(rng(), n, opts.atoms, flags);
    const Bindings b = random_bindings(rng, pl, pr, side, gen);
    const Term l = expand_abstractions(pl.instantiate(b));
    const Term r = expand_abstractions(pr.instantiate(b));
    ValidityTrial t;
    t.nstates = n;
    t.lhs = format_term(l);
    t.rhs = format_term(r);
    if (contains_kind(l, Kind::Par) || contains_kind(r, Kind::Par)) {
      t.structural = true;
      t.ok = l == r;
    } else {
      t.ok = eval_outcome(board, l) == eval_outcome(board, r);
    }
    if (!t.ok && !rep.counterexample) {
      rep.counterexample = k;
      rep.counterexample_board = board;
    }
    rep.trials.push_back(std::move(t));
  }
  return rep;
}

ValidityReport check_validity(const Axiom& axiom, const ValidityOptions& opts) {
  ValidityReport rep = check_validity(axiom.lhs, axiom.rhs, axiom.side, opts);
  rep.identity = axiom.id + " " + rep.identity;
  return rep;
}

}  // namespace gamealg
