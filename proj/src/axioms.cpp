#include "gamealg/axioms.hpp"

#include "gamealg/term.hpp"

namespace gamealg {

const char* to_string(AxiomTable t) {
  switch (t) {
    case AxiomTable::Bag: return "BAG";
    case AxiomTable::Acg: return "ACG";
    case AxiomTable::Abs: return "ABS";
  }
  return "?";
}

const std::vector<Axiom>& axiom_table() {
  using T = AxiomTable;
  using S = SideCondition;
  static const std::vector<Axiom> table = {
      {"G1a", T::Bag, "x + x", "x"},
      {"G1b", T::Bag, "x & x", "x"},
      {"G2a", T::Bag, "x + y", "y + x"},
      {"G2b", T::Bag, "x & y", "y & x"},
      {"G3a", T::Bag, "x + (y + z)", "(x + y) + z"},
      {"G3b", T::Bag, "x & (y & z)", "(x & y) & z"},
      {"G4a", T::Bag, "x + (x & y)", "x"},
      {"G4b", T::Bag, "x & (x + y)", "x"},
      {"G5a", T::Bag, "x + (y & z)", "(x + y) & (x + z)"},
      {"G5b", T::Bag, "x & (y + z)", "(x & y) + (x & z)"},
      {"G6", T::Bag, "(x^d)^d", "x"},
      {"G7a", T::Bag, "(x + y)^d", "x^d & y^d"},
      {"G7b", T::Bag, "(x & y)^d", "x^d + y^d"},
      {"G8", T::Bag, "(x . y) . z", "x . (y . z)"},
      {"G9a", T::Bag, "(x + y) . z", "x . z + y . z"},
      {"G9b", T::Bag, "(x & y) . z", "x . z & y . z"},
      {"G10", T::Bag, "x^d . y^d", "(x . y)^d"},
      {"G11a", T::Bag, "x . iota", "x"},
      {"G11b", T::Bag, "iota . x", "x"},
      {"G12", T::Bag, "iota^d", "iota"},

      {"CG1", T::Acg, "(x || y) || z", "x || (y || z)"},
      {"CG2", T::Acg, "ga || (gb . y)", "(ga || gb) . y"},
      {"CG3", T::Acg, "(ga . x) || gb", "(ga || gb) . x"},
      {"CG4", T::Acg, "(ga . x) || (gb . y)", "(ga || gb) . (x || y)"},
      {"CG5", T::Acg, "(x + y) || z", "x || z + y || z"},
      {"CG6", T::Acg, "x || (y + z)", "x || y + x || z"},
      {"CG7", T::Acg, "(x & y) || z", "x || z & y || z"},
      {"CG8", T::Acg, "x || (y & z)", "x || y & x || z"},
      {"CG9", T::Acg, "(x || y)^d", "x^d || y^d"},
      {"CG10", T::Acg, "iota || x", "x"},
      {"CG11", T::Acg, "x || iota", "x"},

      {"II1", T::Abs, "abs{hide}(ga)", "ga", S::AtomNotHidden},
      {"II2", T::Abs, "abs{hide}(ga)", "iota", S::AtomHidden},
      {"II3", T::Abs, "abs{hide}(x & y)", "abs{hide}(x) & abs{hide}(y)"},
      {"II4", T::Abs, "abs{hide}(x + y)", "abs{hide}(x) + abs{hide}(y)"},
      {"II5", T::Abs, "abs{hide}(x . y)", "abs{hide}(x) . abs{hide}(y)"},
      {"II6", T::Abs, "abs{hide}(x || y)", "abs{hide}(x) || abs{hide}(y)"},
      {"II7", T::Abs, "abs{hide}(x^d)", "abs{hide}(x)^d"},
  };
  return table;
}

const Axiom& find_axiom(const std::string& id) {
  for (const auto& a : axiom_table()) {
    if (a.id == id) return a;
  }
  throw Error("unknown axiom " + id);
}

}  // namespace gamealg
