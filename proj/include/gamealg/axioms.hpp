// Axiom tables as pattern equations.
//
// Patterns use the metavariables of pattern.hpp.  In axioms, ga and gb are
// atom slots and abs{hide}(...) ranges over hide sets.
#pragma once

#include <string>
#include <vector>

namespace gamealg {

enum class AxiomTable { Bag, Acg, Abs };

const char* to_string(AxiomTable t);

/// Side condition on the atom slot ga relative to the hide set.
enum class SideCondition { None, AtomNotHidden, AtomHidden };

struct Axiom {
  std::string id;
  AxiomTable table = AxiomTable::Bag;
  std::string lhs;
  std::string rhs;
  SideCondition side = SideCondition::None;
};

/// Paired laws are split into instances named with a/b suffixes.
const std::vector<Axiom>& axiom_table();

const Axiom& find_axiom(const std::string& id);

}  // namespace gamealg
