// Clusters, exits and the cluster fair abstraction rule for guarded linear
// specifications.
#pragma once

#include <string>
#include <vector>

#include "gamealg/lts.hpp"
#include "gamealg/spec.hpp"
#include "gamealg/term.hpp"

namespace gamealg {

struct Cluster {
  std::vector<std::string> vars;  // in equation order
  AtomSet hide;

  bool contains(const std::string& var) const;
};

struct Exit {
  Summand summand;
  std::string owner;
};

/// Strongly connected components of the graph whose edges are summands
/// with every move hidden or idle.  Clusters come in the order of their
/// first variable.  Throws Error for non-linear or unguarded specs.
std::vector<Cluster> clusters(const RecSpec& spec, const AtomSet& hide);

/// Summands of cluster members that terminate, show a visible move, or
/// leave the cluster; deduplicated by (moves, target), owners in equation
/// order and summands in (moves, target) order.
std::vector<Exit> exits(const RecSpec& spec, const AtomSet& hide, const Cluster& cluster);

/// "{X, Y} exits: c, d"
std::string format_cluster(const RecSpec& spec, const AtomSet& hide, const Cluster& cluster);

struct CfarEquation {
  Term lhs;
  Term rhs;
  std::vector<Exit> exits;
  Player flavor = Player::One;
};

/// iota . abs{I}(<X|E>) = iota . abs{I}(choice of exits), with the flavor of
/// X's equation.  A one-summand equation takes the flavor of the first
/// cluster member with a choice, else the player of the first exit literal.
/// Throws Error when the cluster has no exits.
CfarEquation apply_cfar(const RecSpec& spec, const AtomSet& hide, const std::string& var);

/// The right-hand side built from a chosen list of exits.
Term cfar_rhs(const RecSpec& spec, const AtomSet& hide, const std::vector<Exit>& exits, Player flavor);

struct CfarVerdict {
  CfarEquation equation;
  bool weak = false;
  bool branching = false;
  std::string distinguisher;
};

CfarVerdict verify_cfar(const RecSpec& spec, const AtomSet& hide, const std::string& var,
                        const BuildOptions& opts = {});

/// Compares the two sides of an arbitrary CFAR-shaped equation.
CfarVerdict verify_equation(const RecSpec& spec, const CfarEquation& eq, const BuildOptions& opts = {});

}  // namespace gamealg
