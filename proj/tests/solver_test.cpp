#include <doctest.h>

#include <random>
#include <sstream>

#include "milsem/object_lang.hpp"
#include "milsem/solver.hpp"
#include "milsem/textio.hpp"
#include "support.hpp"

using namespace milsem;
using namespace milsem::testing;

namespace {

const char* kPairRules = R"(
step(fst(pair(A,B)),A).
step(snd(pair(A,B)),B).
step(pair(A,B),pair(C,B)) :- step(A,C).
step(pair(V,B),pair(V,C)) :- value(V),step(B,C).
value(pair(A,B)) :- value(A),value(B).
)";

const char* kOmega = "app(lam(x,app(var(x),var(x))),lam(x,app(var(x),var(x))))";

Program eager_with_pairs() {
  Program p = base_bk(BkVariant::Eager);
  p.append(prog(kPairRules));
  return p;
}

SolveResult run(const Program& p, const Atom& goal, std::uint32_t depth, bool all = false) {
  SolveConfig cfg;
  cfg.depth_limit = depth;
  cfg.find_all = all;
  return solve(p, BuiltinTable{}, goal, cfg);
}

}  // namespace

TEST_CASE("worked pair example evaluates") {
  Term v = Term::fresh_var("V");
  Term e = t("app(lam(x,fst(var(x))),pair(app(lam(x,pair(app(lam(z,var(z)),var(x)),var(y))),var(z)),var(x)))");
  SolveResult r = solve(eager_with_pairs(), object_builtins(), Atom("eval", {e, v}));
  REQUIRE(is_proved(r.outcome));
  CHECK(print_term(apply_subst(std::get<Proved>(r.outcome).answer, v)) == "pair(var(z),var(y))");
}

TEST_CASE("values evaluate to themselves") {
  CHECK(eval_signature(base_bk(BkVariant::Eager), t("lam(x,var(x))")) == "Proved lam(x,var(x))");
  CHECK(eval_signature(base_bk(BkVariant::Lazy), t("lit(3)")) == "Proved lit(3)");
}

TEST_CASE("omega exceeds the depth limit") {
  CHECK(eval_signature(base_bk(BkVariant::Eager), t(kOmega)) == "DepthExceeded");
  OracleConfig cfg;
  cfg.fuel = 1000;
  CHECK(reference_eval(t(kOmega), cfg).kind == EvalResult::Bottom);
}

TEST_CASE("finite failure") {
  CHECK(is_failure(run(prog("q(b)."), a("q(a)"), 10).outcome));
  CHECK(is_failure(run(prog("q(b)."), a("undefined(a)"), 10).outcome));
  CHECK(is_failure(run(Program{}, a("q(a)"), 10).outcome));
}

TEST_CASE("answers are restricted to the goal variables") {
  Atom goal = a("p(X)");
  SolveResult r = run(prog("p(Y) :- q(Y,Z). q(a,b)."), goal, 10);
  REQUIRE(is_proved(r.outcome));
  const auto& ans = std::get<Proved>(r.outcome).answer;
  CHECK(ans.size() == 1);
  CHECK(apply_subst(ans, goal.args[0]) == t("a"));
}

TEST_CASE("find_all counts every answer within the bound") {
  SolveResult r = run(prog("p(a). p(b). p(c)."), a("p(X)"), 5, true);
  CHECK(is_proved(r.outcome));
  CHECK(r.answers.size() == 3);
  CHECK(r.stats.answers == 3);
}

TEST_CASE("depth counts clause applications along a branch") {
  Program chain = prog("n(z). n(s(X)) :- n(X).");
  Atom three = a("n(s(s(s(z))))");
  CHECK(is_depth_exceeded(run(chain, three, 3).outcome));
  CHECK(is_proved(run(chain, three, 4).outcome));
  CHECK(is_failure(run(chain, a("n(s(s(q)))"), 10).outcome));
  CHECK(is_depth_exceeded(run(prog("loop :- loop."), a("loop"), 50).outcome));
}

TEST_CASE("builtins") {
  BuiltinTable table = object_builtins();
  Term out = Term::fresh_var("T");
  SolveResult r = solve(Program{}, table, Atom("substitute", {t("var(y)"), t("x"), t("var(x)"), out}));
  REQUIRE(is_proved(r.outcome));
  CHECK(apply_subst(std::get<Proved>(r.outcome).answer, out) == t("var(y)"));

  CHECK_THROWS_AS(table.add(Symbol{"plus", 3}, [](const Atom&) { return std::vector<Substitution>{}; }),
                  std::invalid_argument);
  CHECK_FALSE(table.contains(Symbol{"plus", 2}));
  CHECK(is_failure(solve(Program{}, table, a("plus(1,2,4)")).outcome));
  CHECK_THROWS_AS(solve(Program{}, table, a("plus(X,Y,4)")), BuiltinError);
  CHECK_THROWS_AS(solve(Program{}, table, Atom("substitute", {t("var(y)"), t("x"), t("var(f(a))"), out})),
                  BuiltinError);
}

TEST_CASE("a two-answer builtin participates in backtracking") {
  BuiltinTable table;
  table = register_builtin(table, Symbol{"two", 1}, [](const Atom& g) {
    std::vector<Substitution> out;
    for (const char* c : {"a", "b"}) {
      if (auto s = unify(g.args[0], Term::constant(c))) out.push_back(*s);
    }
    return out;
  });
  Atom goal = a("p(X)");
  SolveResult r = solve(prog("p(X) :- two(X), ok(X). ok(b)."), table, goal);
  REQUIRE(is_proved(r.outcome));
  CHECK(apply_subst(std::get<Proved>(r.outcome).answer, goal.args[0]) == t("b"));

  SolveConfig all;
  all.find_all = true;
  Atom direct = a("two(Y)");
  SolveResult both = solve(Program{}, table, direct, all);
  REQUIRE(both.answers.size() == 2);
  CHECK(apply_subst(both.answers[0], direct.args[0]) == t("a"));
  CHECK(apply_subst(both.answers[1], direct.args[0]) == t("b"));
}

TEST_CASE("trace prints one line per resolution step") {
  std::ostringstream os;
  SolveConfig cfg;
  cfg.trace = &os;
  solve(prog("p(X) :- q(X). q(a)."), BuiltinTable{}, a("p(Y)"), cfg);
  std::string text = os.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(text.find("q(") != std::string::npos);
}

TEST_CASE("occurs check mode in resolution") {
  Program p = prog("eq(X,X).");
  CHECK(is_proved(run(p, a("eq(Y,f(Y))"), 5).outcome));
  SolveConfig strict;
  strict.occurs = OccursCheck::On;
  CHECK(is_failure(solve(p, BuiltinTable{}, a("eq(Y,f(Y))"), strict).outcome));
}

TEST_CASE("solver instances accept extra clauses") {
  Solver s(prog("p(a)."), BuiltinTable{});
  CHECK(is_failure(s.solve(a("p(b)")).outcome));
  s.add_clauses(prog("p(b)."));
  CHECK(is_proved(s.solve(a("p(b)")).outcome));
}

TEST_CASE("depth monotonicity on random programs") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    Program p = random_small_program(rng);
    Atom goal = random_query(rng, false);
    std::string first_proof, first_failure;
    int proved_at = -1, failed_at = -1;
    for (std::uint32_t d = 1; d <= 10; ++d) {
      SolveResult r = run(p, goal, d);
      if (proved_at >= 0) CHECK_MESSAGE(is_proved(r.outcome), print_program(p), print_atom(goal), " d=", d);
      if (failed_at >= 0) CHECK_MESSAGE(is_failure(r.outcome), print_program(p), print_atom(goal), " d=", d);
      if (is_proved(r.outcome) && proved_at < 0) proved_at = static_cast<int>(d);
      if (is_failure(r.outcome) && failed_at < 0) failed_at = static_cast<int>(d);
    }
  }
}

TEST_CASE("agreement with ground forward chaining") {
  std::mt19937_64 rng(99);
  const std::uint32_t depth = 8;
  for (int i = 0; i < 200; ++i) {
    Program p = random_datalog(rng);
    GroundModel m = least_model(p);
    for (const auto& q : all_ground_queries()) {
      SolveResult r = run(p, q, depth);
      auto it = m.cost.find(print_atom(q));
      bool in_model = it != m.cost.end();
      if (is_proved(r.outcome)) CHECK_MESSAGE(in_model, print_program(p), print_atom(q));
      if (is_failure(r.outcome)) CHECK_MESSAGE(!in_model, print_program(p), print_atom(q));
      if (in_model && it->second <= depth) CHECK_MESSAGE(is_proved(r.outcome), print_program(p), print_atom(q));
    }
    Atom open = random_query(rng, false);
    SolveResult r = run(p, open, depth, true);
    for (const auto& ans : r.answers) {
      Atom inst = apply_subst(ans, open);
      if (inst.as_term().is_ground()) CHECK(m.cost.count(print_atom(inst)) == 1);
    }
  }
}

TEST_CASE("identical inputs give identical outcomes") {
  Program p = eager_with_pairs();
  for (const auto& term : load_corpus("pairs")) CHECK(eval_signature(p, term) == eval_signature(p, term));
}
