#include "gamealg/term.hpp"

#include <algorithm>
#include <cstdint>
#include <mutex>
#include <unordered_map>

namespace gamealg {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t saturating_add(std::size_t a, std::size_t b) {
  return a > SIZE_MAX - b ? SIZE_MAX : a + b;
}

// Hash-consing: structurally equal terms share one node, so equality of
// handles is pointer equality and memo tables keyed by node see every
// repeated subterm.  The table is never destroyed; nodes may outlive it
// during static destruction.
struct InternTable {
  std::mutex mutex;
  std::unordered_multimap<std::size_t, std::pair<const detail::Node*, std::weak_ptr<const detail::Node>>> nodes;
};

InternTable& intern_table() {
  static InternTable* table = new InternTable;
  return *table;
}

bool shallow_equal(const detail::Node& a, const detail::Node& b) {
  if (a.kind != b.kind || a.name != b.name || a.spec != b.spec || a.hide != b.hide) return false;
  if (a.kids.size() != b.kids.size()) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i) {
    if (a.kids[i].node() != b.kids[i].node()) return false;
  }
  return true;
}

void release(const detail::Node* p) {
  {
    InternTable& t = intern_table();
    std::lock_guard<std::mutex> lock(t.mutex);
    auto [lo, hi] = t.nodes.equal_range(p->hash);
    for (auto it = lo; it != hi; ++it) {
      if (it->second.first == p) {
        t.nodes.erase(it);
        break;
      }
    }
  }
  delete p;
}

std::shared_ptr<const detail::Node> make(detail::Node n) {
  std::size_t h = std::hash<int>{}(static_cast<int>(n.kind));
  h = mix(h, std::hash<std::string>{}(n.name));
  h = mix(h, std::hash<std::string>{}(n.spec));
  for (const auto& a : n.hide) h = mix(h, std::hash<std::string>{}(a));
  std::size_t size = 1;
  std::size_t depth = 0;
  for (const auto& k : n.kids) {
    h = mix(h, k.hash());
    size = saturating_add(size, k.size());
    depth = std::max(depth, k.depth() + 1);
  }
  n.hash = h;
  n.size = size;
  n.depth = depth;
  InternTable& t = intern_table();
  // Candidates are released only after the lock is dropped.
  std::vector<std::shared_ptr<const detail::Node>> seen;
  std::lock_guard<std::mutex> lock(t.mutex);
  auto [lo, hi] = t.nodes.equal_range(h);
  for (auto it = lo; it != hi; ++it) {
    seen.push_back(it->second.second.lock());
    if (seen.back() && shallow_equal(*seen.back(), n)) return seen.back();
  }
  std::shared_ptr<const detail::Node> fresh(new detail::Node(std::move(n)), release);
  t.nodes.emplace(h, std::make_pair(fresh.get(), std::weak_ptr<const detail::Node>(fresh)));
  return fresh;
}

const std::shared_ptr<const detail::Node>& idle_node() {
  static const auto node = make(detail::Node{});
  return node;
}

}  // namespace

Term::Term() : node_(idle_node()) {}

Term Term::idle() { return Term(); }

Term Term::atom(std::string name) {
  detail::Node n;
  n.kind = Kind::Atom;
  n.name = std::move(name);
  return Term(make(std::move(n)));
}

Term Term::dual(Term body) {
  detail::Node n;
  n.kind = Kind::Dual;
  n.kids = {std::move(body)};
  return Term(make(std::move(n)));
}

Term Term::choice(Player p, Term left, Term right) {
  detail::Node n;
  n.kind = p == Player::One ? Kind::Join : Kind::Meet;
  n.kids = {std::move(left), std::move(right)};
  return Term(make(std::move(n)));
}

Term Term::comp(Term left, Term right) {
  detail::Node n;
  n.kind = Kind::Comp;
  n.kids = {std::move(left), std::move(right)};
  return Term(make(std::move(n)));
}

Term Term::par(Term left, Term right) {
  detail::Node n;
  n.kind = Kind::Par;
  n.kids = {std::move(left), std::move(right)};
  return Term(make(std::move(n)));
}

Term Term::abs(AtomSet hide, Term body) {
  detail::Node n;
  n.kind = Kind::Abs;
  n.hide = std::move(hide);
  n.kids = {std::move(body)};
  return Term(make(std::move(n)));
}

Term Term::rec(std::string var, std::string spec) {
  detail::Node n;
  n.kind = Kind::Rec;
  n.name = std::move(var);
  n.spec = std::move(spec);
  return Term(make(std::move(n)));
}

Kind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const std::string& Term::spec() const { return node_->spec; }
const AtomSet& Term::hide() const { return node_->hide; }
std::size_t Term::arity() const { return node_->kids.size(); }

Term Term::child(std::size_t i) const {
  if (i >= node_->kids.size()) throw Error("term child index out of range");
  return node_->kids[i];
}

Term Term::with_children(const std::vector<Term>& kids) const {
  if (kids.size() != arity()) throw Error("with_children: arity mismatch");
  detail::Node n = *node_;
  n.kids = kids;
  return Term(make(std::move(n)));
}

std::size_t Term::hash() const { return node_->hash; }
std::size_t Term::size() const { return node_->size; }
std::size_t Term::depth() const { return node_->depth; }

bool Term::is_literal() const {
  switch (kind()) {
    case Kind::Atom:
    case Kind::Idle:
      return true;
    case Kind::Dual:
      return left().is(Kind::Atom);
    default:
      return false;
  }
}

bool operator==(const Term& a, const Term& b) {
  return a.node_ == b.node_;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case Kind::Idle:
      return std::strong_ordering::equal;
    case Kind::Atom:
      return a.name().compare(b.name()) <=> 0;
    case Kind::Rec:
      if (auto c = a.name().compare(b.name()) <=> 0; c != 0) return c;
      return a.spec().compare(b.spec()) <=> 0;
    case Kind::Abs:
      if (auto c = a.hide() <=> b.hide(); c != 0) return c;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.node_->kids.size(); ++i) {
    if (auto c = a.node_->kids[i] <=> b.node_->kids[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

namespace {
void collect_atoms(const Term& t, AtomSet& out) {
  if (t.is(Kind::Atom)) out.insert(t.name());
  for (std::size_t i = 0; i < t.arity(); ++i) collect_atoms(t.child(i), out);
}
}  // namespace

AtomSet atoms_of(const Term& t) {
  AtomSet out;
  collect_atoms(t, out);
  return out;
}

bool contains_kind(const Term& t, Kind k) {
  if (t.is(k)) return true;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (contains_kind(t.child(i), k)) return true;
  }
  return false;
}

bool in_bag_fragment(const Term& t) {
  return !contains_kind(t, Kind::Par) && in_acg_fragment(t);
}

bool in_acg_fragment(const Term& t) {
  return !contains_kind(t, Kind::Abs) && !contains_kind(t, Kind::Rec);
}

}  // namespace gamealg
