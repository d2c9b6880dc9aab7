// Recursive specifications, linear bodies and guardedness.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gamealg/term.hpp"

namespace gamealg {

/// A named finite set of recursive equations.  Equation order is preserved;
/// the first equation's variable is the conventional entry point.
struct RecSpec {
  std::string name;
  std::vector<std::pair<std::string, Term>> equations;

  const Term* find(const std::string& var) const;
  const Term& rhs(const std::string& var) const;
  bool binds(const std::string& var) const { return find(var) != nullptr; }
  std::vector<std::string> variables() const;
};

/// Specifications visible to a term, keyed by name.
class SpecEnv {
 public:
  SpecEnv() = default;
  explicit SpecEnv(std::vector<RecSpec> specs);

  void add(RecSpec spec);
  const RecSpec* find(const std::string& name) const;
  const RecSpec& at(const std::string& name) const;
  bool empty() const { return specs_.empty(); }
  const std::map<std::string, RecSpec>& all() const { return specs_; }

 private:
  std::map<std::string, RecSpec> specs_;
};

/// One move of a linear summand: a player literal, or idle.
struct LiteralOrIdle {
  bool idle = false;
  std::string atom;
  Player player = Player::One;

  static LiteralOrIdle literal(std::string a, Player p) { return {false, std::move(a), p}; }
  static LiteralOrIdle iota() { return {true, {}, Player::One}; }

  Term to_term() const;
  friend auto operator<=>(const LiteralOrIdle&, const LiteralOrIdle&) = default;
};

/// (m1 || ... || mk) . target, or the terminating bundle when target is empty.
struct Summand {
  std::vector<LiteralOrIdle> moves;
  std::optional<std::string> target;

  /// Moves in sorted order: the bundle's label does not depend on nesting.
  std::vector<LiteralOrIdle> sorted_moves() const;
  bool all_moves_in(const AtomSet& hidden) const;
  Term to_term(const std::string& spec) const;
};

struct LinearBody {
  std::vector<Summand> summands;
  Player flavor = Player::One;

  Term to_term(const std::string& spec) const;
};

struct SpecClassification {
  bool is_linear = false;
  std::map<std::string, std::optional<LinearBody>> linear_bodies;
  bool is_guarded = false;
};

/// Bundle term for a move list, right-nested: m1 || (m2 || ...).
Term bundle_term(const std::vector<LiteralOrIdle>& moves);

/// Splits a choice spine of the given flavor into its operands.
std::vector<Term> choice_operands(const Term& t, Player flavor);

/// Left-nested choice of the operands; requires a nonempty list.
Term fold_choice(Player flavor, const std::vector<Term>& operands);

/// Reads a right-hand side as a linear body, if it has that shape.
std::optional<LinearBody> extract_linear_body(const RecSpec& spec, const Term& rhs);

/// Throws Error if some right-hand side mentions a variable the spec does
/// not bind.
void check_bound(const RecSpec& spec);

SpecClassification classify_spec(const RecSpec& spec);

/// Builds a spec from linear bodies, in the given order.
RecSpec make_linear_spec(const std::string& name,
                         const std::vector<std::pair<std::string, LinearBody>>& bodies);

}  // namespace gamealg
