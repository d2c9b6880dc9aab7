// Finite game boards and outcome relations.
//
// A board has at most five states, so a set of states is a 5-bit mask and a
// relation row (all sets a player can force from one state) is a 32-bit
// mask indexed by those set masks.
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gamealg/axioms.hpp"
#include "gamealg/random.hpp"
#include "gamealg/term.hpp"

namespace gamealg {

constexpr std::size_t kMaxBoardStates = 5;

using StateSet = std::uint32_t;

struct OutcomeRelation {
  /// rows[s] has bit X set iff (s, X) is in the relation.
  std::vector<std::uint32_t> rows;

  bool contains(std::size_t s, StateSet x) const { return (rows[s] >> x) & 1U; }
  void insert(std::size_t s, StateSet x) { rows[s] |= 1U << x; }
  /// Adds every superset of every member.
  void mon_close(std::size_t nstates);
  friend bool operator==(const OutcomeRelation&, const OutcomeRelation&) = default;
};

struct BoardFlags {
  bool fin = false;
  bool det = false;
};

struct GameBoard {
  std::vector<std::string> states;
  std::map<std::pair<std::string, Player>, OutcomeRelation> rho;
  BoardFlags flags;

  std::size_t size() const { return states.size(); }
  StateSet full() const { return (1U << states.size()) - 1; }
  const OutcomeRelation& relation(const std::string& atom, Player p) const;
  std::string format_set(StateSet x) const;
};

/// Parses the JSON board format.  Throws Error on unknown states, an empty
/// or oversized state list, or a CON violation.
GameBoard parse_board(const std::string& text);

std::string board_to_json(const GameBoard& b);

struct ConditionCheck {
  bool ok = true;
  std::string witness;
};

struct BoardReport {
  ConditionCheck mon;
  ConditionCheck con;
  std::optional<ConditionCheck> fin;  // present when the board asks for it
  std::optional<ConditionCheck> det;

  bool ok() const { return mon.ok && con.ok && (!fin || fin->ok) && (!det || det->ok); }
};

BoardReport validate_board(const GameBoard& b);

struct Outcome {
  OutcomeRelation p1;
  OutcomeRelation p2;

  const OutcomeRelation& of(Player p) const { return p == Player::One ? p1 : p2; }
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// Throws Error for parallel, abstraction, recursion, or a missing atom.
Outcome eval_outcome(const GameBoard& b, const Term& t);

struct InclusionResult {
  bool incl1 = false;
  bool incl2 = false;
  bool included = false;
  bool equivalent = false;
};

InclusionResult check_inclusion(const GameBoard& b, const Term& t1, const Term& t2);

InclusionResult check_weak_board(const GameBoard& b, const Term& t1, const AtomSet& i1, const Term& t2,
                                 const AtomSet& i2);

GameBoard random_board(std::uint64_t seed, std::size_t nstates, const std::vector<std::string>& atoms,
                       BoardFlags flags = {});

struct ValidityOptions {
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  std::size_t max_states = 4;
  std::vector<std::string> atoms{"a", "b", "c"};
  int depth = 2;
};

struct ValidityTrial {
  std::size_t nstates = 0;
  std::string lhs;
  std::string rhs;
  bool ok = false;
  /// The sides contain parallel composition and were compared as terms.
  bool structural = false;
};

struct ValidityReport {
  std::string identity;
  std::vector<ValidityTrial> trials;
  std::optional<std::size_t> counterexample;  // index of the first failing trial
  std::optional<GameBoard> counterexample_board;

  bool valid() const { return !counterexample.has_value(); }
  /// One line per trial and a summary line.
  std::string render() const;
};

/// Samples boards and closed instances of lhs = rhs and compares outcomes.
/// Abstractions are expanded by renaming to idle first.
ValidityReport check_validity(const std::string& lhs, const std::string& rhs, SideCondition side,
                              const ValidityOptions& opts);

ValidityReport check_validity(const Axiom& axiom, const ValidityOptions& opts);

}  // namespace gamealg
