#include <gtest/gtest.h>

#include <cstdlib>
#include <json.hpp>
#include <sstream>

#include "gamealg/cli.hpp"

using namespace gamealg;

namespace {

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;
};

Invocation run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Invocation r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data(const std::string& name) { return std::string(GAMEALG_TEST_DIR) + "/data/" + name; }

struct Case {
  std::vector<std::string> args;
  int code;
  std::string expect;  // substring of stdout, or of stderr for code 2
};

std::vector<Case> corpus() {
  const std::string board = data("board2.json");
  const std::string cfar = data("cfar.spec");
  const std::string guard = data("guard.spec");
  return {
      {{"fmt", "(b+a)"}, 0, "b + a\n"},
      {{"fmt", "--ac", "c + (b + a)"}, 0, "a + b + c"},
      {{"fmt", "a +"}, 2, "term grammar:"},
      {{"normalize", "(a+b).c", "--system", "bag"}, 0, "a . c + b . c"},
      {{"normalize", "(a || b)^d"}, 0, "a^d || b^d"},
      {{"normalize", "--trace", "(a+b).c"}, 0, "step 1: RG9a at path []: a . c + b . c"},
      {{"normalize", "abs{a}(a)"}, 2, "error:"},
      {{"lts", "a . b"}, 0, "des (0,2,3)"},
      {{"lts", "--format", "dot", "a"}, 0, "digraph"},
      {{"lts", "--max-states", "1", "a . b"}, 1, "des"},
      {{"lts", "--spec", cfar, "<X|F>"}, 0, "des (0,2,2)"},
      {{"eq", "a+b", "b+a", "--kind", "strong", "--via", "lts"}, 0, "equivalent"},
      {{"eq", "a", "b"}, 1, "after ⟨⟩, offers 1:{a} vs 1:{b}"},
      {{"eq", "a . iota", "a", "--via", "lts", "--kind", "weak"}, 0, "equivalent"},
      {{"eq", "a . iota", "a", "--via", "lts"}, 1, "not equivalent"},
      {{"eq", "a + b^d", "b^d + a", "--mode", "permissive", "--via", "lts"}, 0, "equivalent"},
      {{"eq", "a", "b", "--kind", "fuzzy"}, 2, "usage error"},
      {{"board", "check", "--board", board}, 0, "mon"},
      {{"board", "eval", "--board", board, "a . a"}, 0, "player 1: (s1,{s1}) (s1,{s1,s2})"},
      {{"board", "include", "--board", board, "a", "a + b"}, 1, "included"},
      {{"board", "include", "--board", board, "a . b", "b", "--hide1", "a"}, 0, "equivalent"},
      {{"board", "valid", "G5a", "--trials", "20"}, 0, "no counterexample"},
      {{"board", "valid", "--lhs", "x + y", "--rhs", "x & y", "--trials", "50"}, 1, "counterexample"},
      {{"board", "check", "--board", data("missing.json")}, 2, "error:"},
      {{"audit", "--trials", "3", "--seed", "2"}, 0, "asserted set: ok"},
      {{"audit", "--trials", "3", "--assert", "G11a"}, 1, "asserted set: FAILED"},
      {{"linearize", "a . b"}, 0, "X1 = a . X2;"},
      {{"linearize", "a || b^d"}, 2, "no transitions"},
      {{"cfar", "--spec", cfar, "--name", "E", "--hide", "a", "--verify"}, 0, "iota . abs{a}(c + d)"},
      {{"cfar", "--spec", guard, "--name", "U", "--hide", "a"}, 2, "error:"},
      {{"lpo"}, 0, "RG9a"},
      {{"classify", guard}, 0, "W"},
      {{"frobnicate"}, 2, "usage error"},
      {{}, 2, "usage error"},
  };
}

}  // namespace

TEST(Cli, GoldenCorpus) {
  const auto cases = corpus();
  ASSERT_GE(cases.size(), 30u);
  for (const auto& c : cases) {
    std::string joined;
    for (const auto& a : c.args) joined += a + " ";
    const Invocation r = run(c.args);
    EXPECT_EQ(r.code, c.code) << joined << "\n" << r.out << r.err;
    const std::string& where = c.code == 2 ? r.err : r.out;
    EXPECT_NE(where.find(c.expect), std::string::npos) << joined << "\n" << r.out << r.err;
  }
}

TEST(Cli, JsonParsesBackLosslessly) {
  for (auto c : corpus()) {
    if (c.code == 2 || c.args.empty()) continue;
    c.args.insert(c.args.begin(), "--json");
    const Invocation r = run(c.args);
    EXPECT_EQ(r.code, c.code) << c.args[1];
    ASSERT_FALSE(r.out.empty()) << c.args[1];
    ASSERT_EQ(r.out.back(), '\n');
    const std::string body = r.out.substr(0, r.out.size() - 1);
    const nlohmann::json j = nlohmann::json::parse(body);
    EXPECT_EQ(j.dump(), body) << c.args[1];
  }
}

TEST(Cli, JsonFields) {
  auto j = nlohmann::json::parse(run({"--json", "eq", "a", "b"}).out);
  EXPECT_FALSE(j["equivalent"].get<bool>());
  EXPECT_EQ(j["distinguisher"], "after ⟨⟩, offers 1:{a} vs 1:{b}");
  j = nlohmann::json::parse(run({"normalize", "a.(b+c)^d", "--json"}).out);
  EXPECT_EQ(j["normal_form"], "a . (b^d & c^d)");
  EXPECT_TRUE(j["basic"].get<bool>());
  j = nlohmann::json::parse(run({"--json", "lts", "a . b"}).out);
  EXPECT_EQ(j["transitions"].size(), 2u);
  EXPECT_EQ(j["terminal"], 2);
}

TEST(Cli, SeedsReproduce) {
  const std::vector<std::vector<std::string>> randomized{
      {"audit", "--system", "acg", "--trials", "4", "--seed", "11", "--records"},
      {"board", "valid", "--lhs", "x + y", "--rhs", "x & y", "--trials", "30", "--seed", "5"},
  };
  for (const auto& args : randomized) {
    const Invocation a = run(args);
    const Invocation b = run(args);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.code, b.code);
  }
  EXPECT_NE(run({"audit", "--trials", "4", "--seed", "1", "--records"}).out,
            run({"audit", "--trials", "4", "--seed", "2", "--records"}).out);
}

TEST(Cli, GrammarExcerptOnParseError) {
  const Invocation r = run({"eq", "a + (b", "a"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("while parsing"), std::string::npos);
  EXPECT_NE(r.err.find("term grammar:"), std::string::npos);
}

TEST(Cli, EnvironmentBudget) {
  ::setenv(kMaxStatesEnv, "1", 1);
  const Invocation tight = run({"lts", "a . b"});
  ::unsetenv(kMaxStatesEnv);
  EXPECT_EQ(tight.code, 1);
  EXPECT_NE(tight.err.find("truncated"), std::string::npos);
  EXPECT_EQ(run({"lts", "a . b"}).code, 0);
}

TEST(Cli, EqDefaultsToLtsForRecursion) {
  const Invocation r = run({"--json", "eq", "--spec", data("cfar.spec"), "<X|F>", "a . <X|F> + b"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["via"], "lts");
}
