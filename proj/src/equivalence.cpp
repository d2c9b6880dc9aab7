#include "gamealg/equivalence.hpp"

#include <algorithm>
#include <deque>
#include <iomanip>
#include <map>
#include <sstream>

#include "gamealg/pattern.hpp"
#include "gamealg/random.hpp"
#include "gamealg/syntax.hpp"

namespace gamealg {

const char* to_string(EquivKind k) {
  switch (k) {
    case EquivKind::Strong: return "strong";
    case EquivKind::Weak: return "weak";
    case EquivKind::Branching: return "branching";
  }
  return "?";
}

namespace {

constexpr int kTau = 0;
constexpr int kTick = 1;

using Edges = std::vector<std::vector<std::pair<int, std::size_t>>>;

// Disjoint union of two systems plus a shared sink reached by ticks.
struct Graph {
  std::size_t n = 0;
  Edges out;
  std::vector<std::string> label_names{"tau", "✓"};
  std::size_t init_a = 0;
  std::size_t init_b = 0;
};

Graph join_graph(const Lts& a, const Lts& b) {
  Graph g;
  std::map<Label, int> ids;
  for (const Lts* l : {&a, &b}) {
    for (const auto& tr : l->transitions) {
      if (!tr.label.silent) ids.emplace(tr.label, 0);
    }
  }
  for (auto& [lab, id] : ids) {
    id = static_cast<int>(g.label_names.size());
    g.label_names.push_back(lab.str());
  }
  const std::size_t na = a.num_states();
  g.n = na + b.num_states() + 1;
  const std::size_t sink = g.n - 1;
  g.out.resize(g.n);
  auto add = [&](const Lts& l, std::size_t offset) {
    for (const auto& tr : l.transitions) {
      const int id = tr.label.silent ? kTau : ids.at(tr.label);
      g.out[tr.source + offset].emplace_back(id, tr.target + offset);
    }
    g.out[l.terminal + offset].emplace_back(kTick, sink);
  };
  add(a, 0);
  add(b, na);
  g.init_a = a.initial;
  g.init_b = na + b.initial;
  for (auto& e : g.out) {
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
  }
  return g;
}

std::vector<std::vector<std::size_t>> tau_closure(const Graph& g) {
  std::vector<std::vector<std::size_t>> c(g.n);
  std::vector<std::size_t> mark(g.n, g.n);
  for (std::size_t s = 0; s < g.n; ++s) {
    std::vector<std::size_t> stack{s};
    mark[s] = s;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      c[s].push_back(u);
      for (const auto& [l, t] : g.out[u]) {
        if (l == kTau && mark[t] != s) {
          mark[t] = s;
          stack.push_back(t);
        }
      }
    }
    std::sort(c[s].begin(), c[s].end());
  }
  return c;
}

// s =tau=> t for t in tau*(s);  s =l=> t via tau* l tau*.
Graph saturate(const Graph& g) {
  const auto c = tau_closure(g);
  Graph w = g;
  for (std::size_t s = 0; s < g.n; ++s) {
    std::vector<std::pair<int, std::size_t>> e;
    for (std::size_t t : c[s]) e.emplace_back(kTau, t);
    for (std::size_t s1 : c[s]) {
      for (const auto& [l, s2] : g.out[s1]) {
        if (l == kTau) continue;
        for (std::size_t t : c[s2]) e.emplace_back(l, t);
      }
    }
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    w.out[s] = std::move(e);
  }
  return w;
}

using Signature = std::pair<std::size_t, std::vector<std::pair<int, std::size_t>>>;

std::vector<std::size_t> renumber(const std::vector<Signature>& sigs, std::size_t* count) {
  std::map<Signature, std::size_t> ids;
  std::vector<std::size_t> block(sigs.size());
  for (std::size_t s = 0; s < sigs.size(); ++s) {
    auto [it, fresh] = ids.emplace(sigs[s], ids.size());
    block[s] = it->second;
  }
  *count = ids.size();
  return block;
}

std::vector<std::size_t> refine_strong(const Graph& g) {
  std::vector<std::size_t> block(g.n, 0);
  std::size_t count = 1;
  for (;;) {
    std::vector<Signature> sigs(g.n);
    for (std::size_t s = 0; s < g.n; ++s) {
      sigs[s].first = block[s];
      for (const auto& [l, t] : g.out[s]) sigs[s].second.emplace_back(l, block[t]);
      std::sort(sigs[s].second.begin(), sigs[s].second.end());
      sigs[s].second.erase(std::unique(sigs[s].second.begin(), sigs[s].second.end()), sigs[s].second.end());
    }
    std::size_t next = 0;
    block = renumber(sigs, &next);
    if (next == count) return block;
    count = next;
  }
}

// Signature refinement for branching bisimilarity: a state's signature
// collects the non-inert steps reachable through inert silent steps.
std::vector<std::size_t> refine_branching(const Graph& g) {
  std::vector<std::size_t> block(g.n, 0);
  std::size_t count = 1;
  std::vector<std::size_t> mark(g.n, g.n);
  for (;;) {
    std::vector<Signature> sigs(g.n);
    for (std::size_t s = 0; s < g.n; ++s) {
      sigs[s].first = block[s];
      std::vector<std::size_t> stack{s};
      mark[s] = s;
      while (!stack.empty()) {
        std::size_t u = stack.back();
        stack.pop_back();
        for (const auto& [l, t] : g.out[u]) {
          if (l == kTau && block[t] == block[s]) {
            if (mark[t] != s) {
              mark[t] = s;
              stack.push_back(t);
            }
          } else {
            sigs[s].second.emplace_back(l, block[t]);
          }
        }
      }
      std::sort(sigs[s].second.begin(), sigs[s].second.end());
      sigs[s].second.erase(std::unique(sigs[s].second.begin(), sigs[s].second.end()), sigs[s].second.end());
    }
    std::size_t next = 0;
    block = renumber(sigs, &next);
    if (next == count) return block;
    count = next;
    std::fill(mark.begin(), mark.end(), g.n);
  }
}

std::string offers(const Graph& g, std::size_t s, bool visible_only) {
  std::set<int> labels;
  for (const auto& [l, t] : g.out[s]) {
    if (!(visible_only && l == kTau)) labels.insert(l);
  }
  if (labels.empty()) return "nothing";
  std::string out;
  for (int l : labels) out += (out.empty() ? "" : ", ") + g.label_names[static_cast<std::size_t>(l)];
  return out;
}

std::set<int> offer_set(const Graph& g, std::size_t s, bool visible_only) {
  std::set<int> labels;
  for (const auto& [l, t] : g.out[s]) {
    if (!(visible_only && l == kTau)) labels.insert(l);
  }
  return labels;
}

std::string distinguish(const Graph& g, const std::vector<std::size_t>& block, bool visible_only) {
  struct Node {
    std::size_t p, q;
    std::size_t parent;
    int label;
  };
  std::vector<Node> nodes{{g.init_a, g.init_b, 0, -1}};
  std::set<std::pair<std::size_t, std::size_t>> seen{{g.init_a, g.init_b}};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto [p, q, parent, label] = nodes[i];
    if (offer_set(g, p, visible_only) != offer_set(g, q, visible_only)) {
      std::vector<std::string> trace;
      for (std::size_t k = i; k != 0; k = nodes[k].parent) {
        trace.push_back(g.label_names[static_cast<std::size_t>(nodes[k].label)]);
      }
      std::reverse(trace.begin(), trace.end());
      std::string path;
      for (const auto& l : trace) path += (path.empty() ? "" : ", ") + l;
      return "after ⟨" + path + "⟩, offers " + offers(g, p, visible_only) + " vs " + offers(g, q, visible_only);
    }
    auto push = [&](std::size_t p2, std::size_t q2, int l) {
      if (seen.emplace(p2, q2).second) nodes.push_back({p2, q2, i, l});
    };
    // A step of one side that the other side cannot match into the same block.
    for (int side = 0; side < 2; ++side) {
      const std::size_t from = side == 0 ? p : q;
      const std::size_t other_state = side == 0 ? q : p;
      for (const auto& [l, t] : g.out[from]) {
        std::optional<std::size_t> any;
        bool matched = false;
        for (const auto& [l2, t2] : g.out[other_state]) {
          if (l2 != l) continue;
          if (!any) any = t2;
          if (block[t2] == block[t]) matched = true;
        }
        if (matched || !any) continue;
        if (side == 0) {
          push(t, *any, l);
        } else {
          push(*any, t, l);
        }
      }
    }
  }
  return "the systems differ in the branching structure of silent steps";
}

}  // namespace

EquivResult check_equiv(const Lts& a, const Lts& b, EquivKind kind) {
  if (a.truncated || b.truncated) throw Error("cannot compare truncated transition systems");
  Graph g = join_graph(a, b);
  Graph used = kind == EquivKind::Strong ? g : saturate(g);
  std::vector<std::size_t> block;
  switch (kind) {
    case EquivKind::Strong:
    case EquivKind::Weak:
      block = refine_strong(used);
      break;
    case EquivKind::Branching:
      block = refine_branching(g);
      break;
  }
  EquivResult r;
  r.equivalent = block[g.init_a] == block[g.init_b];
  if (r.equivalent) {
    r.witness.assign(block.begin(), block.end() - 1);
  } else {
    r.distinguisher = distinguish(used, block, kind != EquivKind::Strong);
  }
  return r;
}

bool naive_bisim(const Lts& a, const Lts& b, EquivKind kind) {
  if (a.truncated || b.truncated) throw Error("cannot compare truncated transition systems");
  if (a.num_states() + b.num_states() > 64) throw Error("naive_bisim is limited to 64 states");
  const Graph g = join_graph(a, b);
  const std::size_t n = g.n;
  std::vector<std::vector<bool>> tau(n, std::vector<bool>(n, false));
  for (std::size_t s = 0; s < n; ++s) {
    tau[s][s] = true;
    for (const auto& [l, t] : g.out[s]) {
      if (l == kTau) tau[s][t] = true;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!tau[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (tau[k][j]) tau[i][j] = true;
      }
    }
  }
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, true));

  // Can q answer the step p -l-> p2?
  auto answers = [&](std::size_t p, int l, std::size_t p2, std::size_t q) {
    switch (kind) {
      case EquivKind::Strong:
        for (const auto& [l2, q2] : g.out[q]) {
          if (l2 == l && rel[p2][q2]) return true;
        }
        return false;
      case EquivKind::Weak:
        for (std::size_t q1 = 0; q1 < n; ++q1) {
          if (!tau[q][q1]) continue;
          if (l == kTau) {
            if (rel[p2][q1]) return true;
            continue;
          }
          for (const auto& [l2, q2] : g.out[q1]) {
            if (l2 != l) continue;
            for (std::size_t q3 = 0; q3 < n; ++q3) {
              if (tau[q2][q3] && rel[p2][q3]) return true;
            }
          }
        }
        return false;
      case EquivKind::Branching:
        if (l == kTau && rel[p2][q]) return true;
        for (std::size_t q1 = 0; q1 < n; ++q1) {
          if (!tau[q][q1] || !rel[p][q1]) continue;
          for (const auto& [l2, q2] : g.out[q1]) {
            if (l2 == l && rel[p2][q2]) return true;
          }
        }
        return false;
    }
    return false;
  };

  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = 0; q < n; ++q) {
        if (!rel[p][q]) continue;
        bool ok = true;
        for (const auto& [l, p2] : g.out[p]) {
          if (!answers(p, l, p2, q)) {
            ok = false;
            break;
          }
        }
        if (ok) {
          for (const auto& [l, q2] : g.out[q]) {
            if (!answers(q, l, q2, p)) {
              ok = false;
              break;
            }
          }
        }
        if (!ok) {
          rel[p][q] = false;
          rel[q][p] = false;
          changed = true;
        }
      }
    }
  }
  return rel[g.init_a][g.init_b];
}

// ---- axiom audit ---------------------------------------------------------------

std::size_t AxiomAudit::strong_passes() const {
  return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [](const AuditTrial& t) { return t.strong; }));
}

std::size_t AxiomAudit::weak_passes() const {
  return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [](const AuditTrial& t) { return t.weak; }));
}

const AuditTrial* AxiomAudit::counterexample() const {
  for (const auto& t : trials) {
    if (!t.strong) return &t;
  }
  for (const auto& t : trials) {
    if (!t.weak) return &t;
  }
  return nullptr;
}

bool AuditReport::asserted_ok() const {
  return std::all_of(axioms.begin(), axioms.end(), [](const AxiomAudit& a) { return !a.asserted || a.holds_strong(); });
}

namespace {

bool in_scope(AxiomTable axiom, AxiomTable system) {
  return static_cast<int>(axiom) <= static_cast<int>(system);
}

std::string pad(const std::string& s, std::size_t w) {
  // Width counts code points so that non-ASCII symbols line up.
  std::size_t len = 0;
  for (unsigned char c : s) len += (c & 0xC0) != 0x80;
  return len >= w ? s : s + std::string(w - len, ' ');
}

}  // namespace

AuditReport audit_axioms(const AuditOptions& opts) {
  if (opts.trials == 0) throw Error("audit needs at least one trial");
  AuditReport report;
  report.options = opts;
  TermGen gen;
  gen.max_depth = opts.depth;
  gen.par = opts.system != AxiomTable::Bag;
  gen.abs = opts.system == AxiomTable::Abs;
  BuildOptions build;
  build.mode = opts.mode;
  const auto& table = axiom_table();
  for (std::size_t i = 0; i < table.size(); ++i) {
    const Axiom& ax = table[i];
    if (!in_scope(ax.table, opts.system)) continue;
    const Pattern lhs(ax.lhs);
    const Pattern rhs(ax.rhs);
    AxiomAudit audit;
    audit.id = ax.id;
    audit.table = ax.table;
    audit.asserted = opts.asserted.count(ax.id) > 0;
    for (std::size_t k = 0; k < opts.trials; ++k) {
      Rng rng = make_rng(opts.seed, i, k);
      const Bindings b = random_bindings(rng, lhs, rhs, ax.side, gen);
      const Term l = lhs.instantiate(b);
      const Term r = rhs.instantiate(b);
      const Lts ll = build_lts(l, {}, build);
      const Lts lr = build_lts(r, {}, build);
      AuditTrial t;
      t.lhs = format_term(l);
      t.rhs = format_term(r);
      t.strong = check_equiv(ll, lr, EquivKind::Strong).equivalent;
      t.weak = check_equiv(ll, lr, EquivKind::Weak).equivalent;
      audit.trials.push_back(std::move(t));
    }
    report.axioms.push_back(std::move(audit));
  }
  return report;
}

std::string render_audit_table(const AuditReport& r) {
  std::ostringstream os;
  const auto& o = r.options;
  os << "audit system=" << to_string(o.system) << " mode=" << to_string(o.mode) << " trials=" << o.trials
     << " seed=" << o.seed << " depth=" << o.depth << "\n";
  os << pad("axiom", 7) << pad("table", 7) << pad("asserted", 10) << pad("strong", 9) << pad("weak", 9)
     << "counterexample\n";
  for (const auto& a : r.axioms) {
    const std::string n = std::to_string(a.trials.size());
    os << pad(a.id, 7) << pad(to_string(a.table), 7) << pad(a.asserted ? "yes" : "no", 10)
       << pad(std::to_string(a.strong_passes()) + "/" + n, 9) << pad(std::to_string(a.weak_passes()) + "/" + n, 9);
    if (const AuditTrial* c = a.counterexample()) {
      os << c->lhs << "  vs  " << c->rhs;
    } else {
      os << "-";
    }
    os << "\n";
  }
  os << "asserted set: " << (r.asserted_ok() ? "ok" : "FAILED") << "\n";
  return os.str();
}

std::string render_audit_records(const AuditReport& r) {
  std::ostringstream os;
  for (const auto& a : r.axioms) {
    for (std::size_t k = 0; k < a.trials.size(); ++k) {
      const auto& t = a.trials[k];
      os << a.id << " trial=" << k << " strong=" << (t.strong ? "pass" : "fail")
         << " weak=" << (t.weak ? "pass" : "fail") << " lhs=" << std::quoted(t.lhs) << " rhs=" << std::quoted(t.rhs)
         << "\n";
    }
  }
  return os.str();
}

}  // namespace gamealg
