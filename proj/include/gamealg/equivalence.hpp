// Strong, weak and branching bisimilarity of finite transition systems, and
// the operational axiom audit.
//
// Both systems get an extra visible tick from their terminal state into a
// shared sink before comparison.  Termination is thereby observable, and
// under the weak kinds idle-then-terminate is equivalent to terminate.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gamealg/axioms.hpp"
#include "gamealg/lts.hpp"
#include "gamealg/term_ops.hpp"

namespace gamealg {

enum class EquivKind { Strong, Weak, Branching };

const char* to_string(EquivKind k);

struct EquivResult {
  bool equivalent = false;
  /// Block index for every state of the disjoint union: the first system's
  /// states, then the second's.  Filled when equivalent.
  std::vector<std::size_t> witness;
  /// Shortest experiment that tells the systems apart.  Filled when not.
  std::string distinguisher;
};

/// Throws Error if either input is truncated.
EquivResult check_equiv(const Lts& a, const Lts& b, EquivKind kind);

/// Relation-pruning fixpoint, independent of check_equiv.  Throws Error when
/// the systems have more than 64 states together.
bool naive_bisim(const Lts& a, const Lts& b, EquivKind kind);

struct AuditOptions {
  AxiomTable system = AxiomTable::Bag;
  SemanticsMode mode = SemanticsMode::Literal;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  int depth = 2;
  std::set<std::string> asserted{"G2a", "G2b", "G3a", "G3b", "CG1"};
};

struct AuditTrial {
  std::string lhs;
  std::string rhs;
  bool strong = false;
  bool weak = false;
};

struct AxiomAudit {
  std::string id;
  AxiomTable table = AxiomTable::Bag;
  std::vector<AuditTrial> trials;
  bool asserted = false;

  std::size_t strong_passes() const;
  std::size_t weak_passes() const;
  bool holds_strong() const { return strong_passes() == trials.size(); }
  bool holds_weak() const { return weak_passes() == trials.size(); }
  /// First trial failing strong (or weak, if none fails strong).
  const AuditTrial* counterexample() const;
};

struct AuditReport {
  AuditOptions options;
  std::vector<AxiomAudit> axioms;

  /// True iff every asserted axiom holds under strong equivalence.
  bool asserted_ok() const;
};

/// The BAG audit covers the first table; ACG adds the parallel laws and
/// ABS adds the abstraction laws.  Deterministic in the seed.
AuditReport audit_axioms(const AuditOptions& opts);

/// Fixed-width summary, one row per axiom.
std::string render_audit_table(const AuditReport& r);

/// One line per axiom and trial.
std::string render_audit_records(const AuditReport& r);

}  // namespace gamealg
