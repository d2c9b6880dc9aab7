#include "gamealg/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "gamealg/board.hpp"
#include "gamealg/equivalence.hpp"
#include "gamealg/fairness.hpp"
#include "gamealg/lts.hpp"
#include "gamealg/rewrite.hpp"
#include "gamealg/syntax.hpp"
#include "gamealg/term_ops.hpp"

namespace gamealg {

using json = nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

SpecEnv load_specs(const std::string& path) {
  SpecEnv env;
  if (path.empty()) return env;
  for (auto& s : parse_spec_file(read_file(path))) env.add(std::move(s));
  return env;
}

AtomSet parse_hide(std::string text) {
  text.erase(std::remove_if(text.begin(), text.end(), [](char c) { return c == '{' || c == '}' || c == ' '; }),
             text.end());
  AtomSet out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == "iota") throw Error("iota cannot be hidden");
    out.insert(item);
  }
  return out;
}

std::size_t default_max_states() {
  if (const char* v = std::getenv(kMaxStatesEnv)) {
    try {
      return static_cast<std::size_t>(std::stoull(v));
    } catch (const std::exception&) {
      throw Error(std::string(kMaxStatesEnv) + " must be a positive integer");
    }
  }
  return BuildOptions{}.max_states;
}

System infer_system(const Term& a, const std::optional<Term>& b = std::nullopt) {
  const bool par = contains_kind(a, Kind::Par) || (b && contains_kind(*b, Kind::Par));
  return par ? System::ACG : System::BAG;
}

json lts_json(const Lts& l) {
  json j;
  j["states"] = l.state_names;
  j["initial"] = l.initial;
  j["terminal"] = l.terminal;
  j["truncated"] = l.truncated;
  j["transitions"] = json::array();
  for (const auto& tr : l.transitions) j["transitions"].push_back({tr.source, tr.label.str(), tr.target});
  return j;
}

json relation_json(const GameBoard& b, const OutcomeRelation& r) {
  json out = json::array();
  for (std::size_t s = 0; s < b.size(); ++s) {
    for (StateSet x = 0; x <= b.full(); ++x) {
      if (!r.contains(s, x)) continue;
      json set = json::array();
      for (std::size_t k = 0; k < b.size(); ++k) {
        if (x & (StateSet{1} << k)) set.push_back(b.states[k]);
      }
      out.push_back({b.states[s], set});
    }
  }
  return out;
}

std::string relation_text(const GameBoard& b, const OutcomeRelation& r) {
  std::string out;
  for (std::size_t s = 0; s < b.size(); ++s) {
    for (StateSet x = 0; x <= b.full(); ++x) {
      if (r.contains(s, x)) out += (out.empty() ? "" : " ") + ("(" + b.states[s] + "," + b.format_set(x) + ")");
    }
  }
  return out.empty() ? "(empty)" : out;
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

// Options shared by every subcommand that builds transition systems.
struct BuildFlags {
  std::string spec_file;
  std::string mode = "literal";
  std::size_t max_states = 0;
  std::size_t unfold_depth = BuildOptions{}.unfold_depth;

  void attach(CLI::App* app) {
    app->add_option("--spec", spec_file, "specification file for <X|E> references");
    app->add_option("--mode", mode, "choice semantics")->check(CLI::IsMember({"literal", "permissive"}));
    app->add_option("--max-states", max_states, "state budget (default from " + std::string(kMaxStatesEnv) + ")");
    app->add_option("--unfold-depth", unfold_depth, "recursion unfolding budget");
  }

  BuildOptions options() const {
    BuildOptions o;
    o.mode = mode == "permissive" ? SemanticsMode::Permissive : SemanticsMode::Literal;
    o.max_states = max_states ? max_states : default_max_states();
    o.unfold_depth = unfold_depth;
    return o;
  }
};

struct Cli {
  std::ostream& out;
  std::ostream& err;
  bool as_json = false;

  int fmt(const std::string& text, bool ac) {
    Term t = parse_term(text);
    if (ac) t = ac_canonicalize(t);
    if (as_json) {
      out << json{{"input", text}, {"term", format_term(t)}}.dump() << "\n";
    } else {
      out << format_term(t) << "\n";
    }
    return 0;
  }

  int normalize_cmd(const std::string& text, const std::string& system_name, bool trace) {
    const Term t = parse_term(text);
    const System sys = system_name.empty() ? infer_system(t) : system_name == "acg" ? System::ACG : System::BAG;
    const RewriteTrace tr = rewrite_trace(t, sys);
    const Term nf = normalize(t, sys);
    if (as_json) {
      json j{{"input", text}, {"system", to_string(sys)}, {"normal_form", format_term(nf)},
             {"basic", is_basic(nf, sys)}};
      j["trace"] = json::array();
      for (const auto& s : tr.steps) j["trace"].push_back({{"rule", s.rule}, {"path", s.path}, {"term", format_term(s.after)}});
      out << j.dump() << "\n";
      return 0;
    }
    if (trace) out << format_trace(tr);
    out << format_term(nf) << "\n";
    return 0;
  }

  int lts_cmd(const std::string& text, const BuildFlags& flags, const std::string& format) {
    const Term t = parse_term(text);
    const Lts l = build_lts(t, load_specs(flags.spec_file), flags.options());
    if (as_json) {
      out << lts_json(l).dump() << "\n";
    } else {
      out << export_lts(l, format == "dot" ? ExportFormat::Dot : ExportFormat::Aut);
    }
    if (l.truncated) {
      err << "warning: budget exhausted; transition system truncated at " << l.num_states() << " states\n";
      return 1;
    }
    return 0;
  }

  int eq_cmd(const std::string& t1, const std::string& t2, const std::string& kind_name, std::string via,
             const std::string& system_name, const BuildFlags& flags) {
    const Term a = parse_term(t1);
    const Term b = parse_term(t2);
    const bool closed = !contains_kind(a, Kind::Rec) && !contains_kind(b, Kind::Rec) &&
                        !contains_kind(a, Kind::Abs) && !contains_kind(b, Kind::Abs);
    if (via.empty()) via = closed ? "normal-form" : "lts";
    const EquivKind kind = kind_name == "weak"        ? EquivKind::Weak
                           : kind_name == "branching" ? EquivKind::Branching
                                                      : EquivKind::Strong;
    json j{{"left", t1}, {"right", t2}, {"via", via}};
    bool equivalent = false;
    std::string detail;
    auto lts_compare = [&] {
      const SpecEnv env = load_specs(flags.spec_file);
      const BuildOptions o = flags.options();
      const EquivResult r = check_equiv(build_lts(a, env, o), build_lts(b, env, o), kind);
      return r;
    };
    if (via == "normal-form") {
      const System sys = system_name.empty() ? infer_system(a, b) : system_name == "acg" ? System::ACG : System::BAG;
      const Term na = ac_canonicalize(normalize(a, sys));
      const Term nb = ac_canonicalize(normalize(b, sys));
      equivalent = na == nb;
      j["system"] = to_string(sys);
      j["normal_forms"] = {format_term(na), format_term(nb)};
      detail = "normal forms: " + format_term(na) + "  |  " + format_term(nb);
      if (!equivalent) {
        const EquivResult r = lts_compare();
        if (!r.equivalent) {
          j["distinguisher"] = r.distinguisher;
          detail += "\ndistinguisher (" + std::string(to_string(kind)) + "): " + r.distinguisher;
        }
      }
    } else {
      const EquivResult r = lts_compare();
      equivalent = r.equivalent;
      j["kind"] = to_string(kind);
      if (!equivalent) {
        j["distinguisher"] = r.distinguisher;
        detail = "distinguisher: " + r.distinguisher;
      }
    }
    j["equivalent"] = equivalent;
    if (as_json) {
      out << j.dump() << "\n";
    } else {
      out << (equivalent ? "equivalent" : "not equivalent") << "\n";
      if (!detail.empty()) out << detail << "\n";
    }
    return equivalent ? 0 : 1;
  }

  int board_check(const std::string& file) {
    const GameBoard b = parse_board(read_file(file));
    const BoardReport r = validate_board(b);
    json j;
    auto line = [&](const char* name, const ConditionCheck& c) {
      j[name] = {{"ok", c.ok}, {"witness", c.witness}};
      if (!as_json) out << name << ": " << (c.ok ? "ok" : "FAILED " + c.witness) << "\n";
    };
    line("mon", r.mon);
    line("con", r.con);
    if (r.fin) line("fin", *r.fin);
    if (r.det) line("det", *r.det);
    j["ok"] = r.ok();
    if (as_json) out << j.dump() << "\n";
    return r.ok() ? 0 : 1;
  }

  int board_eval(const std::string& file, const std::string& text) {
    const GameBoard b = parse_board(read_file(file));
    const Outcome o = eval_outcome(b, parse_term(text));
    if (as_json) {
      out << json{{"term", text}, {"p1", relation_json(b, o.p1)}, {"p2", relation_json(b, o.p2)}}.dump() << "\n";
    } else {
      out << "player 1: " << relation_text(b, o.p1) << "\n";
      out << "player 2: " << relation_text(b, o.p2) << "\n";
    }
    return 0;
  }

  int board_include(const std::string& file, const std::string& t1, const std::string& t2,
                    const std::optional<std::string>& hide1, const std::optional<std::string>& hide2) {
    const GameBoard b = parse_board(read_file(file));
    const Term a = parse_term(t1);
    const Term c = parse_term(t2);
    const bool weak = hide1 || hide2;
    const InclusionResult r = weak ? check_weak_board(b, a, parse_hide(hide1.value_or("")), c,
                                                      parse_hide(hide2.value_or("")))
                                   : check_inclusion(b, a, c);
    if (as_json) {
      out << json{{"weak", weak}, {"incl1", r.incl1}, {"incl2", r.incl2}, {"included", r.included},
                  {"equivalent", r.equivalent}}
                 .dump()
          << "\n";
    } else {
      out << "incl1: " << yes_no(r.incl1) << "\nincl2: " << yes_no(r.incl2) << "\nincluded: " << yes_no(r.included)
          << "\nequivalent: " << yes_no(r.equivalent) << "\n";
    }
    return r.included ? 0 : 1;
  }

  int board_valid(const std::string& axiom, const std::string& lhs, const std::string& rhs,
                  const ValidityOptions& o) {
    ValidityReport r;
    if (!axiom.empty()) {
      r = check_validity(find_axiom(axiom), o);
    } else {
      if (lhs.empty() || rhs.empty()) throw CLI::ValidationError("give an axiom id or both --lhs and --rhs");
      r = check_validity(lhs, rhs, SideCondition::None, o);
    }
    if (as_json) {
      json j{{"identity", r.identity}, {"trials", r.trials.size()}, {"valid", r.valid()}};
      if (r.counterexample) {
        const auto& t = r.trials[*r.counterexample];
        j["counterexample"] = {{"trial", *r.counterexample}, {"lhs", t.lhs}, {"rhs", t.rhs},
                               {"board", json::parse(board_to_json(*r.counterexample_board))}};
      }
      out << j.dump() << "\n";
    } else {
      out << r.render();
    }
    return r.valid() ? 0 : 1;
  }

  int audit_cmd(const AuditOptions& o, bool records) {
    const AuditReport r = audit_axioms(o);
    if (as_json) {
      json j{{"system", to_string(o.system)}, {"mode", to_string(o.mode)}, {"trials", o.trials},
             {"seed", o.seed}, {"asserted_ok", r.asserted_ok()}};
      j["axioms"] = json::array();
      for (const auto& a : r.axioms) {
        json ja{{"id", a.id}, {"table", to_string(a.table)}, {"asserted", a.asserted},
                {"strong_passes", a.strong_passes()}, {"weak_passes", a.weak_passes()},
                {"holds_strong", a.holds_strong()}, {"holds_weak", a.holds_weak()}};
        if (const AuditTrial* c = a.counterexample()) ja["counterexample"] = {c->lhs, c->rhs};
        j["axioms"].push_back(ja);
      }
      out << j.dump() << "\n";
    } else {
      out << render_audit_table(r);
      if (records) out << render_audit_records(r);
    }
    return r.asserted_ok() ? 0 : 1;
  }

  int linearize_cmd(const std::string& text, const BuildFlags& flags, const std::string& name) {
    const RecSpec s = linearize(parse_term(text), load_specs(flags.spec_file), flags.options(), name);
    if (as_json) {
      json eqs = json::array();
      for (const auto& [var, rhs] : s.equations) eqs.push_back({var, format_term_in(rhs, s.name)});
      out << json{{"name", s.name}, {"entry", "X1"}, {"equations", eqs}, {"spec", format_spec(s)}}.dump() << "\n";
    } else {
      out << format_spec(s);
    }
    return 0;
  }

  int cfar_cmd(const BuildFlags& flags, const std::string& spec_name, std::string var, const std::string& hide_text,
               bool verify) {
    const SpecEnv env = load_specs(flags.spec_file);
    if (env.empty()) throw CLI::ValidationError("cfar needs --spec with at least one specification");
    const RecSpec& spec = spec_name.empty() ? env.all().begin()->second : env.at(spec_name);
    if (var.empty()) var = spec.equations.front().first;
    const AtomSet hide = parse_hide(hide_text);
    json j{{"spec", spec.name}, {"var", var}, {"hide", format_atoms(hide)}};
    j["clusters"] = json::array();
    for (const auto& c : clusters(spec, hide)) {
      const std::string line = format_cluster(spec, hide, c);
      j["clusters"].push_back(line);
      if (!as_json) out << line << "\n";
    }
    const CfarEquation eq = apply_cfar(spec, hide, var);
    j["lhs"] = format_term(eq.lhs);
    j["rhs"] = format_term(eq.rhs);
    if (!as_json) out << format_term(eq.lhs) << " = " << format_term(eq.rhs) << "\n";
    int code = 0;
    if (verify) {
      const CfarVerdict v = verify_equation(spec, eq, flags.options());
      j["weak"] = v.weak;
      j["branching"] = v.branching;
      if (!as_json) {
        out << "weak: " << (v.weak ? "equivalent" : "not equivalent") << "\n";
        out << "branching: " << (v.branching ? "equivalent" : "not equivalent") << "\n";
        if (!v.weak) out << "distinguisher: " << v.distinguisher << "\n";
      }
      code = v.weak ? 0 : 1;
    }
    if (as_json) out << j.dump() << "\n";
    return code;
  }

  int lpo_cmd(const std::string& system_name) {
    const System sys = system_name == "bag" ? System::BAG : System::ACG;
    bool ok = true;
    json j = json::array();
    for (const auto& v : lpo_check(sys)) {
      if (v.enabled && !v.holds) ok = false;
      j.push_back({{"rule", v.rule}, {"phase", to_string(v.phase)}, {"enabled", v.enabled}, {"holds", v.holds}});
      if (!as_json) {
        out << std::left << std::setw(7) << v.rule << std::setw(10) << to_string(v.phase) << std::setw(10)
            << (v.enabled ? "enabled" : "disabled") << (v.holds ? "holds" : "fails") << "\n";
      }
    }
    if (as_json) out << json{{"system", to_string(sys)}, {"ok", ok}, {"rules", j}}.dump() << "\n";
    return ok ? 0 : 1;
  }

  int classify_cmd(const std::string& file) {
    const SpecEnv env = load_specs(file);
    json j = json::array();
    for (const auto& [name, s] : env.all()) {
      check_bound(s);
      const SpecClassification c = classify_spec(s);
      j.push_back({{"spec", name}, {"linear", c.is_linear}, {"guarded", c.is_guarded}});
      if (!as_json) out << name << ": linear=" << yes_no(c.is_linear) << " guarded=" << yes_no(c.is_guarded) << "\n";
    }
    if (as_json) out << j.dump() << "\n";
    return 0;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Game algebra workbench: terms, rewriting, transition systems, boards and CFAR.", "gamealg"};
  app.require_subcommand(1);
  app.fallthrough();
  Cli cli{out, err};
  app.add_flag("--json", cli.as_json, "machine-readable output");

  std::string term1;
  std::string term2;
  std::string system_name;
  BuildFlags flags;
  std::function<int()> action;

  auto* fmt = app.add_subcommand("fmt", "parse and print a term with minimal parentheses");
  bool ac = false;
  fmt->add_option("term", term1, "game term")->required();
  fmt->add_flag("--ac", ac, "print the AC-canonical form");
  fmt->callback([&] { action = [&] { return cli.fmt(term1, ac); }; });

  auto* norm = app.add_subcommand("normalize", "rewrite a closed term to its basic normal form");
  bool trace = false;
  norm->add_option("term", term1, "game term")->required();
  norm->add_option("--system", system_name, "bag or acg (default: acg iff the term has ||)")
      ->check(CLI::IsMember({"bag", "acg"}));
  norm->add_flag("--trace", trace, "print every rewrite step");
  norm->callback([&] { action = [&] { return cli.normalize_cmd(term1, system_name, trace); }; });

  auto* lts = app.add_subcommand("lts", "generate the transition system of a term");
  std::string format = "aut";
  lts->add_option("term", term1, "game term")->required();
  lts->add_option("--format", format, "aut or dot")->check(CLI::IsMember({"aut", "dot"}));
  flags.attach(lts);
  lts->callback([&] { action = [&] { return cli.lts_cmd(term1, flags, format); }; });

  auto* eq = app.add_subcommand("eq", "decide equivalence of two terms");
  std::string kind = "strong";
  std::string via;
  eq->add_option("left", term1, "game term")->required();
  eq->add_option("right", term2, "game term")->required();
  eq->add_option("--kind", kind, "strong, weak or branching")->check(CLI::IsMember({"strong", "weak", "branching"}));
  eq->add_option("--via", via, "lts or normal-form (default: normal-form for closed terms)")
      ->check(CLI::IsMember({"lts", "normal-form"}));
  eq->add_option("--system", system_name, "bag or acg for --via normal-form")->check(CLI::IsMember({"bag", "acg"}));
  flags.attach(eq);
  eq->callback([&] { action = [&] { return cli.eq_cmd(term1, term2, kind, via, system_name, flags); }; });

  auto* board = app.add_subcommand("board", "game boards and outcome relations");
  board->require_subcommand(1);
  board->fallthrough();
  std::string board_file;
  auto* bcheck = board->add_subcommand("check", "validate MON, CON and the requested FIN/DET conditions");
  bcheck->add_option("--board", board_file, "board file (JSON)")->required();
  bcheck->callback([&] { action = [&] { return cli.board_check(board_file); }; });
  auto* beval = board->add_subcommand("eval", "outcome relations of a term");
  beval->add_option("--board", board_file, "board file (JSON)")->required();
  beval->add_option("term", term1, "game term")->required();
  beval->callback([&] { action = [&] { return cli.board_eval(board_file, term1); }; });
  auto* binc = board->add_subcommand("include", "inclusion of outcome relations");
  std::optional<std::string> hide1;
  std::optional<std::string> hide2;
  binc->add_option("--board", board_file, "board file (JSON)")->required();
  binc->add_option("left", term1, "game term")->required();
  binc->add_option("right", term2, "game term")->required();
  binc->add_option("--hide1", hide1, "atoms renamed to iota in the left term (weak comparison)");
  binc->add_option("--hide2", hide2, "atoms renamed to iota in the right term (weak comparison)");
  binc->callback([&] { action = [&] { return cli.board_include(board_file, term1, term2, hide1, hide2); }; });
  auto* bvalid = board->add_subcommand("valid", "search random boards for a counterexample to an identity");
  std::string axiom;
  std::string lhs;
  std::string rhs;
  ValidityOptions vopts;
  bvalid->add_option("axiom", axiom, "axiom id such as G5a");
  bvalid->add_option("--lhs", lhs, "left pattern (metavariables x, y, z)");
  bvalid->add_option("--rhs", rhs, "right pattern");
  bvalid->add_option("--trials", vopts.trials, "number of boards");
  bvalid->add_option("--seed", vopts.seed, "random seed");
  bvalid->add_option("--max-board-states", vopts.max_states, "largest board size")->check(CLI::Range(1, 5));
  bvalid->callback([&] { action = [&] { return cli.board_valid(axiom, lhs, rhs, vopts); }; });

  auto* audit = app.add_subcommand("audit", "check axioms against the operational semantics");
  AuditOptions aopts;
  std::string audit_system = "bag";
  std::string audit_mode = "literal";
  std::vector<std::string> asserted;
  bool records = false;
  audit->add_option("--system", audit_system, "bag, acg or abs")->check(CLI::IsMember({"bag", "acg", "abs"}));
  audit->add_option("--mode", audit_mode, "choice semantics")->check(CLI::IsMember({"literal", "permissive"}));
  audit->add_option("--trials", aopts.trials, "instances per axiom")->check(CLI::PositiveNumber);
  audit->add_option("--seed", aopts.seed, "random seed");
  audit->add_option("--depth", aopts.depth, "depth of instantiated terms");
  audit->add_option("--assert", asserted, "asserted axioms (default G2a,G2b,G3a,G3b,CG1)")->delimiter(',');
  audit->add_flag("--records", records, "one line per axiom and trial");
  audit->callback([&] {
    action = [&] {
      aopts.system = audit_system == "abs" ? AxiomTable::Abs : audit_system == "acg" ? AxiomTable::Acg : AxiomTable::Bag;
      aopts.mode = audit_mode == "permissive" ? SemanticsMode::Permissive : SemanticsMode::Literal;
      if (!asserted.empty()) aopts.asserted = {asserted.begin(), asserted.end()};
      return cli.audit_cmd(aopts, records);
    };
  });

  auto* lin = app.add_subcommand("linearize", "read a linear specification off a term's transition system");
  std::string lin_name = "L";
  lin->add_option("term", term1, "game term")->required();
  lin->add_option("--name", lin_name, "name of the produced specification");
  flags.attach(lin);
  lin->callback([&] { action = [&] { return cli.linearize_cmd(term1, flags, lin_name); }; });

  auto* cfar = app.add_subcommand("cfar", "clusters, exits and the cluster fair abstraction rule");
  std::string spec_name;
  std::string var;
  std::string hide_text;
  bool verify = false;
  cfar->add_option("--name", spec_name, "specification to use (default: first in file)");
  cfar->add_option("--var", var, "recursion variable (default: first equation)");
  cfar->add_option("--hide", hide_text, "hidden atoms, comma separated");
  cfar->add_flag("--verify", verify, "check both sides for weak and branching equivalence");
  flags.attach(cfar);
  cfar->callback([&] { action = [&] { return cli.cfar_cmd(flags, spec_name, var, hide_text, verify); }; });

  auto* lpo = app.add_subcommand("lpo", "termination audit of the rewrite rules");
  std::string lpo_system = "acg";
  lpo->add_option("--system", lpo_system, "bag or acg")->check(CLI::IsMember({"bag", "acg"}));
  lpo->callback([&] { action = [&] { return cli.lpo_cmd(lpo_system); }; });

  auto* classify = app.add_subcommand("classify", "linearity and guardedness of specifications");
  std::string classify_file;
  classify->add_option("spec", classify_file, "specification file")->required();
  classify->callback([&] { action = [&] { return cli.classify_cmd(classify_file); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    return action ? action() : 2;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << "while parsing: " << e.production() << "\n";
    err << "term grammar:\n" << term_grammar();
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace gamealg
