// Labeled transition systems generated from terms.
//
// States are terms with duals pushed to literals; termination is an explicit
// state that always takes the last index.  Transitions out of each state are
// sorted by label and target, and states are numbered in breadth-first
// discovery order, so equal inputs give equal numberings.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gamealg/spec.hpp"
#include "gamealg/term.hpp"

namespace gamealg {

struct Label {
  bool silent = true;
  Player player = Player::One;
  std::vector<std::string> moves;  // sorted multiset, nonempty unless silent

  static Label tau() { return {}; }
  static Label move(Player p, std::vector<std::string> atoms);

  /// "tau", or "1:{a,b}".
  std::string str() const;
  friend auto operator<=>(const Label&, const Label&) = default;
};

struct Transition {
  std::size_t source = 0;
  Label label;
  std::size_t target = 0;

  friend auto operator<=>(const Transition&, const Transition&) = default;
};

struct Lts {
  std::vector<std::string> state_names;
  std::size_t initial = 0;
  std::size_t terminal = 0;
  std::vector<Transition> transitions;
  bool truncated = false;

  std::size_t num_states() const { return state_names.size(); }
  /// Outgoing transitions per state, in transition order.
  std::vector<std::vector<Transition>> out_edges() const;
};

enum class SemanticsMode { Literal, Permissive };

const char* to_string(SemanticsMode m);

struct BuildOptions {
  SemanticsMode mode = SemanticsMode::Literal;
  std::size_t max_states = 100000;
  std::size_t unfold_depth = 32;
};

/// One-step successors of a state term; an empty target is termination.
struct Step {
  Label label;
  std::optional<Term> target;
};

/// Throws Error if t mentions an unknown or unguarded specification.
void check_specs(const Term& t, const SpecEnv& specs);

std::vector<Step> successors(const Term& state, const SpecEnv& specs, const BuildOptions& opts,
                             bool* truncated = nullptr);

Lts build_lts(const Term& t, const SpecEnv& specs, const BuildOptions& opts = {});

/// Generation with only the choice and composition rules for atoms, idle,
/// and literals.  Accepts parallel-free, abstraction-free closed terms.
Lts build_lts_bag(const Term& t, SemanticsMode mode = SemanticsMode::Literal);

/// Reads a linear specification off the transition system of t, one
/// variable X1, X2, ... per non-terminal state (X1 is the initial one).
/// Fails when the system is truncated, when a state has no transitions,
/// and, in literal mode, when a state offers moves of both players.
RecSpec linearize(const Term& t, const SpecEnv& specs, const BuildOptions& opts = {},
                  const std::string& name = "L");

bool lts_isomorphic(const Lts& a, const Lts& b);

enum class ExportFormat { Aut, Dot };

std::string export_lts(const Lts& l, ExportFormat format);

}  // namespace gamealg
