// Seeded generators for terms, specifications and transition systems.
//
// All draws go through `pick`, which reduces the raw 64-bit output, so the
// sequences are the same on every standard library.
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gamealg/axioms.hpp"
#include "gamealg/lts.hpp"
#include "gamealg/pattern.hpp"
#include "gamealg/spec.hpp"
#include "gamealg/term.hpp"

namespace gamealg {

using Rng = std::mt19937_64;

/// Uniform-ish index in [0, n); n must be positive.
inline std::size_t pick(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

/// Independent stream for (seed, a, b): used to give each trial its own RNG.
Rng make_rng(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0);

struct TermGen {
  std::vector<std::string> atoms{"a", "b", "c"};
  int max_depth = 3;
  bool idle = true;
  bool dual = true;
  bool join = true;
  bool meet = true;
  bool comp = true;
  bool par = false;
  bool abs = false;
};

Term random_term(Rng& rng, const TermGen& gen);

/// A random nonempty subset of the atoms.
AtomSet random_hide(Rng& rng, const std::vector<std::string>& atoms);

/// Closed instance bindings for an equation: term metavariables get random
/// terms, guard slots get atoms, and a hide set is drawn when a side
/// abstracts over one.  The side condition relates ga to the hide set.
Bindings random_bindings(Rng& rng, const Pattern& lhs, const Pattern& rhs, SideCondition side,
                         const TermGen& gen);

struct SpecGen {
  std::size_t max_vars = 5;
  std::vector<std::string> atoms{"a", "b", "c"};
  std::size_t max_summands = 3;
  std::size_t max_bundle = 2;
  /// Probability weight (out of 10) of an idle move in a summand.
  int idle_weight = 1;
  /// All equations share one randomly chosen flavor.
  bool uniform_flavor = false;
};

/// A guarded linear specification.  Every literal's player matches the
/// flavor of its equation.
RecSpec random_linear_spec(Rng& rng, const SpecGen& gen, const std::string& name = "E");

struct LtsGen {
  std::size_t max_states = 30;
  std::vector<Label> labels{Label::tau(), Label::move(Player::One, {"a"}), Label::move(Player::One, {"b"}),
                            Label::move(Player::Two, {"a"})};
  std::size_t max_out = 3;
};

Lts random_lts(Rng& rng, const LtsGen& gen);

/// A copy of l with one state split in two; the result is strongly
/// bisimilar to l.
Lts split_state(Rng& rng, const Lts& l);

}  // namespace gamealg
