#include <doctest.h>

#include <random>

#include "milsem/mil.hpp"
#include "milsem/object_lang.hpp"
#include "milsem/textio.hpp"
#include "support.hpp"

using namespace milsem;
using namespace milsem::testing;

TEST_CASE("parse_term builds object terms") {
  Term x = parse_term("pair(var(z),var(y))");
  REQUIRE(x.is_compound());
  CHECK(x.functor() == Symbol{"pair", 2});
  CHECK(x.arg(0) == Term::compound("var", {Term::constant("z")}));
  CHECK(x.arg(1) == Term::compound("var", {Term::constant("y")}));
  CHECK(print_term(x) == "pair(var(z),var(y))");
}

TEST_CASE("parse_term variables and integers") {
  Term v = parse_term("X");
  CHECK(v.is_var());
  CHECK(v.var_name() == "X");
  CHECK(parse_term("lit(-3)").arg(0).int_value() == -3);
  Term same = parse_term("f(X,X,_,_)");
  CHECK(same.arg(0) == same.arg(1));
  CHECK(same.arg(2) != same.arg(3));
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_term("f(");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 3);
    CHECK_FALSE(e.expected().empty());
  }
  CHECK_THROWS_AS(parse_clause("p(a) :- ."), ParseError);
  CHECK_THROWS_AS(parse_term("f(a,,b)"), ParseError);
}

TEST_CASE("print_clause") {
  CHECK(print_clause(parse_clause("step(pair(A,B),pair(C,B)) :- step(A,C).")) ==
        "step(pair(A,B),pair(C,B)) :- step(A,C).");
  CHECK(print_clause(parse_clause("value(true).")) == "value(true).");
  CHECK(print_clause(parse_clause("left(A,B,A).")) == "left(A,_,A).");
  CHECK(print_clause(parse_clause("p(X) :- q(X,Y), r(Y).")) == "p(A) :- q(A,B),r(B).");
}

TEST_CASE("term and clause round trip on random input") {
  std::mt19937_64 rng(5);
  TermGenOptions opts;
  for (int i = 0; i < 500; ++i) {
    Term x = random_object_term(rng, opts);
    CHECK(parse_term(print_term(x)) == x);
  }
  std::vector<std::string> names{"X", "Y", "Z"};
  for (int i = 0; i < 300; ++i) {
    std::vector<Term> vars;
    for (const auto& n : names) vars.push_back(Term::fresh_var(n));
    auto arg = [&]() -> Term {
      switch (rng() % 5) {
        case 0: return vars[rng() % 3];
        case 1: return Term::integer(static_cast<std::int64_t>(rng() % 7) - 3);
        case 2: return Term::constant("a");
        case 3: return Term::compound("s", {vars[rng() % 3]});
        default: return random_object_term(rng, opts);
      }
    };
    Clause c{Atom("h", {arg(), arg()}), {}};
    for (std::size_t j = rng() % 3; j > 0; --j) c.body.push_back(Atom("b", {arg()}));
    CHECK(alpha_equivalent(parse_clause(print_clause(c)), c));
  }
}

TEST_CASE("metarules parse and print in list encoding") {
  Metarule m = parse_metarule(
      "metarule(step2l, [func(H/2)], ([step,[H,A,B],[H,C,B]] :- [[step,A,C]])).");
  CHECK(m.name == "step2l");
  REQUIRE(m.decls.size() == 1);
  CHECK(m.decls[0].kind == MetaVarKind::Func);
  CHECK(m.decls[0].arity == 2);
  CHECK(m.head.pred_name == "step");
  CHECK(m.head.args[0].kind == TemplateTerm::Kind::Apply);
  REQUIRE(m.body.size() == 1);
  Metarule again = parse_metarule(print_metarule(m));
  CHECK(print_metarule(again) == print_metarule(m));

  Metarule fact = parse_metarule("metarule(value_const, [const(C)], [value,C]).");
  CHECK(fact.body.empty());
  CHECK(fact.decls[0].kind == MetaVarKind::Const);
}

TEST_CASE("undeclared metavariables are rejected") {
  CHECK_THROWS_AS(parse_metarule("metarule(bad, [], ([step,[H,A],B] :- [])).") , SemanticError);
}

TEST_CASE("pairs scenario parses with the expected markup") {
  ScenarioSpec s = load_scenario("pairs");
  CHECK(s.head_preds == std::vector<Symbol>{{"step", 2}, {"value", 1}});
  CHECK(s.body_preds == std::vector<Symbol>{{"left", 3}, {"right", 3}});
  bool has_worked_example = false;
  for (const auto& e : s.examples)
    if (e.tag == ExampleTag::Pos &&
        print_atom(e.goal).rfind("eval(app(lam(x,fst(var(x))),pair(app(lam(x,pair(", 0) == 0)
      has_worked_example = true;
  CHECK(has_worked_example);
  CHECK(s.options.depth_limit == 300);
}

TEST_CASE("scenario sections and defaults") {
  ScenarioSpec only_bk = parse_scenario("%% bk\np(a).\n");
  CHECK(only_bk.examples.empty());
  CHECK(only_bk.options.depth_limit == 300);
  CHECK(only_bk.options.max_clauses == 10);
  CHECK(only_bk.options.neg_depth_policy == NegDepthPolicy::Reject);
  LearnResult r = learn(only_bk, BuiltinTable{});
  CHECK(r.status == LearnStatus::Found);
  REQUIRE(r.hypothesis);
  CHECK(r.hypothesis->size() == 0);

  CHECK_THROWS_AS(parse_scenario("%% bk\np(a).\n%% examples\npos(q(a)).\n"), SemanticError);
  CHECK_THROWS_AS(parse_scenario("%% bk\np(a).\n%% nonsense\n"), SemanticError);
  CHECK_THROWS_AS(parse_scenario("%% bk\np(a).\n%% head_preds\nq/1.\n"), SemanticError);
  CHECK_THROWS_AS(parse_scenario("p(a).\n"), ParseError);
}

TEST_CASE("options section") {
  ScenarioSpec s = parse_scenario(
      "%% bk\np(a).\r\n%% options\ndepth_limit(40).\nmax_clauses(3).\nneg_depth_policy(accept).\ntimeout(2).\n");
  CHECK(s.options.depth_limit == 40);
  CHECK(s.options.max_clauses == 3);
  CHECK(s.options.neg_depth_policy == NegDepthPolicy::Accept);
  CHECK(s.options.timeout_seconds == doctest::Approx(2.0));
}

TEST_CASE("function pool gains example functors outside the bk") {
  ScenarioSpec s = load_scenario("pairs");
  std::vector<Symbol> expected{{"pair", 2}, {"fst", 1}, {"snd", 1}};
  CHECK(s.func_pool == expected);

  ScenarioSpec c = load_scenario("conditionals");
  auto has = [&](const Symbol& x) { return std::find(c.func_pool.begin(), c.func_pool.end(), x) != c.func_pool.end(); };
  CHECK(has({"if", 2}));
  CHECK(has({"thenelse", 2}));
  CHECK(has({"true", 0}));
  CHECK(has({"false", 0}));
  CHECK_FALSE(has({"lam", 2}));
  CHECK_FALSE(has({"x", 0}));
}

TEST_CASE("every shipped scenario parses and reprints losslessly") {
  for (const auto& name : builtin_scenario_names()) {
    CAPTURE(name);
    ScenarioSpec s = parse_scenario(builtin_scenario_text(name));
    ScenarioSpec again = parse_scenario(print_scenario(s));
    CHECK(print_scenario(again) == print_scenario(s));
    CHECK(again.examples.size() == s.examples.size());
    CHECK(again.metarules.size() == s.metarules.size());
    CHECK(print_program(again.bk) == print_program(s.bk));
  }
}

TEST_CASE("corpus files parse") {
  for (const char* name : {"pairs", "lists", "conditionals", "lambda", "mixed", "divergent"}) {
    CAPTURE(name);
    CHECK_FALSE(load_corpus(name).empty());
  }
  CHECK(parse_term_lines("% only a comment\n\n").empty());
  CHECK_THROWS_AS(parse_term_lines("true\nf(\n"), ParseError);
}
