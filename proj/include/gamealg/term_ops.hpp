// Structural operations on terms: AC-canonical forms, basic-term
// recognition, renaming to idle, and pushing duals to literals.
#pragma once

#include "gamealg/term.hpp"

namespace gamealg {

enum class System { BAG, ACG };

const char* to_string(System s);

/// Flattens every same-flavor choice spine, sorts its operands under the
/// canonical term order and rebuilds it left-nested.  Applied recursively.
/// Duplicates are kept: the result is AC-equal to the input.
Term ac_canonicalize(const Term& t);

/// Guards of a basic composition: a literal (atom, dualized atom, idle) or,
/// in ACG, a parallel bundle of literals.
bool is_guard(const Term& t, System system);

/// Membership in the inductively defined set of basic terms.
bool is_basic(const Term& t, System system);

/// Replaces every atom in `hidden` by idle, including under duals.
Term rename_to_idle(const Term& t, const AtomSet& hidden);

/// Replaces every abstraction abs{I}(x) by rename_to_idle(x, I).
Term expand_abstractions(const Term& t);

/// Pushes duals down to atoms:  (x^d)^d = x,  choice flips its owner,
/// composition and parallel distribute, iota^d = iota, and
/// abs{I}(x)^d = abs{I}(x^d).  Duals over recursion references stay.
Term push_duals(const Term& t);

}  // namespace gamealg
