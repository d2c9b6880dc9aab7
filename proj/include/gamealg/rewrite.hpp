// Term rewriting to basic terms.
//
// Normalization runs in two phases.  DualPush drives every dual down to an
// atom; Main then applies the remaining rules.  Both phases use a
// leftmost-innermost strategy with rules tried in table order at each
// position.  Commutativity is not a rule: the normal form is finished by a
// lattice canonicalization that works modulo associativity, commutativity,
// idempotence, absorption and distributivity of the two choices.
#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "gamealg/pattern.hpp"
#include "gamealg/term.hpp"
#include "gamealg/term_ops.hpp"

namespace gamealg {

enum class Phase { DualPush, Main };

const char* to_string(Phase p);

struct RewriteRule {
  std::string id;
  Pattern lhs;
  Pattern rhs;
  Phase phase = Phase::Main;
  bool acg_only = false;
  /// Disabled rules stay in the table for the termination audit.
  bool enabled = true;
};

/// Every rule, enabled or not, in priority order.
const std::vector<RewriteRule>& rule_table();

/// Enabled rules of one phase for a system, in priority order.
std::vector<const RewriteRule*> active_rules(System system, Phase phase);

struct RewriteStep {
  std::string rule;
  std::vector<std::size_t> path;
  Term after;
};

struct RewriteTrace {
  Term start;
  std::vector<RewriteStep> steps;

  const Term& result() const { return steps.empty() ? start : steps.back().after; }
};

/// Throws Error unless t is closed, abstraction-free and inside `system`.
void check_rewritable(const Term& t, System system);

/// Exhaustive leftmost-innermost rewriting with the phase's rules.
Term run_phase(const Term& t, System system, Phase phase);

/// Join of meets over non-choice generators, deduplicated, absorbed and
/// sorted; applied recursively below generators as well.
Term lattice_canonical(const Term& t);

Term normalize(const Term& t, System system);

/// The individual rule applications of normalize, in order.  Each lattice
/// canonicalization that changes the term is recorded as a step named "ACI"
/// at the root, so the last term of the trace is the normal form.
RewriteTrace rewrite_trace(const Term& t, System system);

/// "step k: RULE at path [i,j]: term" lines.
std::string format_trace(const RewriteTrace& trace);

bool eq_by_normal_form(const Term& a, const Term& b, System system);

struct LpoVerdict {
  std::string rule;
  Phase phase = Phase::Main;
  bool enabled = true;
  bool holds = false;
};

/// Decides lhs >lpo rhs for each rule of the system, enabled or not.
std::vector<LpoVerdict> lpo_check(System system);

/// Lexicographic path order on patterns (metavariables are variables).
/// Precedence: dual > parallel > composition > meet > join > atoms > idle;
/// choices compare arguments right to left, everything else left to right.
bool lpo_greater(const Term& s, const Term& t);

}  // namespace gamealg
