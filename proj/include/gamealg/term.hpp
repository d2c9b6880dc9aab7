// Abstract syntax of game terms.
//
// Terms are immutable and share structure: a Term is a cheap handle to a
// reference-counted node.  Equality is structural; the three-way comparison
// is the fixed total order used for AC-canonical forms:
//
//   Idle < Atom < Dual < Join < Meet < Comp < Par < Abs < Rec
//
// compared recursively and lexicographically within a kind.
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace gamealg {

enum class Player : std::uint8_t { One = 1, Two = 2 };

inline Player other(Player p) { return p == Player::One ? Player::Two : Player::One; }
inline int index(Player p) { return static_cast<int>(p); }

/// Node kinds, declared in canonical order.
enum class Kind : std::uint8_t { Idle, Atom, Dual, Join, Meet, Comp, Par, Abs, Rec };

using AtomSet = std::set<std::string>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
struct Node;
}

class Term {
 public:
  /// Default-constructed terms are the idle game.
  Term();

  static Term idle();
  static Term atom(std::string name);
  static Term dual(Term body);
  static Term choice(Player p, Term left, Term right);
  static Term join(Term left, Term right) { return choice(Player::One, std::move(left), std::move(right)); }
  static Term meet(Term left, Term right) { return choice(Player::Two, std::move(left), std::move(right)); }
  static Term comp(Term left, Term right);
  static Term par(Term left, Term right);
  static Term abs(AtomSet hide, Term body);
  static Term rec(std::string var, std::string spec);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }
  bool is_choice() const { return is(Kind::Join) || is(Kind::Meet); }
  /// Owner of a choice node.  Only meaningful when is_choice().
  Player player() const { return is(Kind::Meet) ? Player::Two : Player::One; }

  /// Atom name, or the variable name of a recursion reference.
  const std::string& name() const;
  /// Specification name of a recursion reference.
  const std::string& spec() const;
  /// Hidden atoms of an abstraction.
  const AtomSet& hide() const;

  std::size_t arity() const;
  Term child(std::size_t i) const;
  Term left() const { return child(0); }
  Term right() const { return child(1); }
  Term body() const { return child(0); }

  /// Same node kind and payload, new children.
  Term with_children(const std::vector<Term>& kids) const;

  std::size_t hash() const;
  std::size_t size() const;
  std::size_t depth() const;

  /// True for an atom, a dualized atom, or idle.
  bool is_literal() const;

  const detail::Node* node() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  explicit Term(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::Node> node_;
};

namespace detail {
struct Node {
  Kind kind = Kind::Idle;
  std::string name;
  std::string spec;
  AtomSet hide;
  std::vector<Term> kids;
  std::size_t hash = 0;
  std::size_t size = 1;
  std::size_t depth = 0;
};
}  // namespace detail

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Atoms occurring in t (under duals, abstractions and all operators).
AtomSet atoms_of(const Term& t);

/// True if any node of t has kind k.
bool contains_kind(const Term& t, Kind k);

/// The fragment a closed term belongs to.
bool in_bag_fragment(const Term& t);  // no Par, Abs, Rec
bool in_acg_fragment(const Term& t);  // no Abs, Rec

}  // namespace gamealg
