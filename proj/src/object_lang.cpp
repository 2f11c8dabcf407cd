#include "milsem/object_lang.hpp"

#include <sstream>

#include "milsem/textio.hpp"

namespace milsem {

namespace detail {
std::vector<std::pair<std::string, std::string>> embedded_scenario_texts();
}

namespace {

bool is(const Term& t, std::string_view name, std::uint32_t arity) {
  return t.is_compound() && t.arity() == arity && t.name() == name;
}

Term c(std::string name, std::vector<Term> args) { return Term::compound(std::move(name), std::move(args)); }

void require_ground(const Term& t, const char* what) {
  if (!t.is_ground()) throw BuiltinError(std::string("substitute/4: ") + what + " is not ground");
}

void check_binders(const Term& t) {
  if (!t.is_compound()) return;
  if ((is(t, "var", 1) || is(t, "lam", 2)) && !is_name(t.arg(0)))
    throw BuiltinError("substitute/4: malformed " + t.name() + " in " + print_term(t));
  for (const auto& a : t.args()) check_binders(a);
}

void collect_names(const Term& t, std::set<std::string>& out) {
  if (!t.is_compound()) return;
  if ((is(t, "var", 1) || is(t, "lam", 2)) && is_name(t.arg(0))) out.insert(t.arg(0).name());
  for (const auto& a : t.args()) collect_names(a, out);
}

Term subst_rec(const Term& v, const std::string& x, const Term& t, const std::set<std::string>& fv_v) {
  if (!t.is_compound()) return t;
  if (is(t, "var", 1)) return t.arg(0).name() == x ? v : t;
  if (is(t, "lam", 2)) {
    const std::string& y = t.arg(0).name();
    if (y == x) return t;
    const Term& body = t.arg(1);
    if (fv_v.count(y) && free_vars(body).count(x)) {
      std::set<std::string> avoid = fv_v;
      collect_names(body, avoid);
      avoid.insert(x);
      std::string y2 = fresh_name(y, avoid);
      Term renamed = subst_rec(c("var", {Term::constant(y2)}), y, body, {y2});
      return c("lam", {Term::constant(y2), subst_rec(v, x, renamed, fv_v)});
    }
    return c("lam", {t.arg(0), subst_rec(v, x, body, fv_v)});
  }
  if (t.arity() == 0) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back(subst_rec(v, x, a, fv_v));
  return Term::compound(t.functor(), std::move(args));
}

const char* const kCoreBk = R"(
eval(E1,E1) :- value(E1).
eval(E1,E3) :- step(E1,E2), eval(E2,E3).
value(var(_)).
value(lam(_,_)).
value(lit(_)).
step(add(lit(M),lit(N)),lit(K)) :- plus(M,N,K).
step(add(A,B),add(C,B)) :- step(A,C).
step(add(V,A),add(V,B)) :- value(V), step(A,B).
left(A,_,A).
right(_,B,B).
)";

const char* const kLazyApp = R"(
step(app(lam(X,T1),V),T2) :- substitute(V,X,T1,T2).
step(app(A,B),app(C,B)) :- step(A,C).
)";

const char* const kEagerApp = R"(
step(app(lam(X,T1),V),T2) :- value(V), substitute(V,X,T1,T2).
step(app(A,B),app(C,B)) :- step(A,C).
step(app(V,A),app(V,B)) :- value(V), step(A,B).
)";

std::optional<std::int64_t> int_arg(const Term& t) {
  if (t.is_int()) return t.int_value();
  if (t.is_var()) return std::nullopt;
  throw BuiltinError("plus/3: expected an integer, found " + print_term(t));
}

}  // namespace

bool is_name(const Term& t) { return t.is_constant(); }

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (std::uint64_t i = 1;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  if (!t.is_compound()) return out;
  if (is(t, "var", 1)) {
    if (is_name(t.arg(0))) out.insert(t.arg(0).name());
    return out;
  }
  if (is(t, "lam", 2) && is_name(t.arg(0))) {
    out = free_vars(t.arg(1));
    out.erase(t.arg(0).name());
    return out;
  }
  for (const auto& a : t.args()) out.merge(free_vars(a));
  return out;
}

Term substitute(const Term& v, const std::string& x, const Term& t) {
  require_ground(v, "replacement");
  require_ground(t, "target");
  check_binders(v);
  check_binders(t);
  return subst_rec(v, x, t, free_vars(v));
}

bool is_value(const Term& t) {
  if (!t.is_compound()) return false;
  if (is(t, "var", 1) || is(t, "lam", 2) || is(t, "lit", 1)) return true;
  if (is(t, "true", 0) || is(t, "false", 0) || is(t, "nil", 0)) return true;
  if (is(t, "pair", 2) || is(t, "cons", 2)) return is_value(t.arg(0)) && is_value(t.arg(1));
  return false;
}

const char* strategy_name(Strategy s) { return s == Strategy::Lazy ? "lazy" : "eager"; }

Strategy parse_strategy(const std::string& s) {
  if (s == "lazy") return Strategy::Lazy;
  if (s == "eager") return Strategy::Eager;
  throw std::invalid_argument("strategy must be lazy or eager, not '" + s + "'");
}

Program base_bk(BkVariant variant) {
  Program p = parse_program(kCoreBk);
  if (variant == BkVariant::Lazy) p.append(parse_program(kLazyApp));
  if (variant == BkVariant::Eager) p.append(parse_program(kEagerApp));
  return p;
}

BuiltinTable object_builtins() {
  BuiltinTable t;
  t.add(Symbol{"substitute", 4}, [](const Atom& g) -> std::vector<Substitution> {
    const Term& x = g.args[1];
    if (!is_name(x)) throw BuiltinError("substitute/4: variable name expected, found " + print_term(x));
    Term r = substitute(g.args[0], x.name(), g.args[2]);
    auto s = unify(g.args[3], r);
    if (!s) return {};
    return {*s};
  });
  t.add(Symbol{"plus", 3}, [](const Atom& g) -> std::vector<Substitution> {
    auto a = int_arg(g.args[0]), b = int_arg(g.args[1]), k = int_arg(g.args[2]);
    Term r;
    const Term* target = nullptr;
    if (a && b) {
      r = Term::integer(*a + *b);
      target = &g.args[2];
    } else if (a && k) {
      r = Term::integer(*k - *a);
      target = &g.args[1];
    } else if (b && k) {
      r = Term::integer(*k - *b);
      target = &g.args[0];
    } else {
      throw BuiltinError("plus/3: at least two arguments must be integers");
    }
    auto s = unify(*target, r);
    if (!s) return {};
    return {*s};
  });
  return t;
}

StepResult reference_step(const Term& t, Strategy strategy) {
  if (is_value(t)) return {StepResult::Value, {}};
  const StepResult stuck{StepResult::Stuck, {}};
  if (!t.is_compound()) return stuck;
  auto stepped = [](Term n) { return StepResult{StepResult::Step, std::move(n)}; };
  // Steps argument `i` of `t`, keeping the others.
  auto congruence = [&](std::size_t i) {
    StepResult r = reference_step(t.arg(i), strategy);
    if (r.kind != StepResult::Step) return stuck;
    std::vector<Term> args(t.args().begin(), t.args().end());
    args[i] = std::move(r.next);
    return stepped(Term::compound(t.functor(), std::move(args)));
  };
  auto beta = [&](const Term& lam, const Term& arg) {
    return stepped(substitute(arg, lam.arg(0).name(), lam.arg(1)));
  };

  if (is(t, "app", 2)) {
    const Term& f = t.arg(0);
    const Term& a = t.arg(1);
    if (strategy == Strategy::Lazy) {
      if (is(f, "lam", 2) && is_name(f.arg(0))) return beta(f, a);
      return congruence(0);
    }
    if (!is_value(f)) return congruence(0);
    if (!is_value(a)) return congruence(1);
    if (is(f, "lam", 2) && is_name(f.arg(0))) return beta(f, a);
    return stuck;
  }
  if (is(t, "pair", 2) || is(t, "cons", 2) || is(t, "add", 2)) {
    if (!is_value(t.arg(0))) return congruence(0);
    if (!is_value(t.arg(1))) return congruence(1);
    if (is(t, "add", 2) && is(t.arg(0), "lit", 1) && is(t.arg(1), "lit", 1) &&
        t.arg(0).arg(0).is_int() && t.arg(1).arg(0).is_int())
      return stepped(c("lit", {Term::integer(t.arg(0).arg(0).int_value() + t.arg(1).arg(0).int_value())}));
    return stuck;
  }
  if (is(t, "fst", 1) || is(t, "snd", 1)) {
    if (!is(t.arg(0), "pair", 2)) return stuck;
    return stepped(t.arg(0).arg(t.name() == "fst" ? 0 : 1));
  }
  if (is(t, "head", 1) || is(t, "tail", 1)) {
    if (!is(t.arg(0), "cons", 2)) return stuck;
    return stepped(t.arg(0).arg(t.name() == "head" ? 0 : 1));
  }
  if (is(t, "if", 2)) {
    const Term& cond = t.arg(0);
    const Term& branches = t.arg(1);
    if (is(cond, "true", 0) || is(cond, "false", 0)) {
      if (!is(branches, "thenelse", 2)) return stuck;
      return stepped(branches.arg(is(cond, "true", 0) ? 0 : 1));
    }
    if (is_value(cond)) return stuck;
    return congruence(0);
  }
  return stuck;
}

EvalResult reference_eval(const Term& t, const OracleConfig& cfg) {
  EvalResult r;
  Term cur = t;
  while (true) {
    StepResult s = reference_step(cur, cfg.strategy);
    if (s.kind == StepResult::Value) {
      r.kind = EvalResult::Value;
      r.term = cur;
      return r;
    }
    if (s.kind == StepResult::Stuck) {
      r.kind = EvalResult::Stuck;
      r.term = cur;
      return r;
    }
    if (r.steps >= cfg.fuel) {
      r.kind = EvalResult::Bottom;
      r.term = cur;
      return r;
    }
    ++r.steps;
    cur = std::move(s.next);
  }
}

ConformanceReport conformance_check(const Program& p, const std::vector<Term>& terms,
                                    const OracleConfig& cfg, std::uint32_t depth,
                                    std::size_t wrong_samples) {
  ConformanceReport rep;
  Solver solver(p, object_builtins());
  SolveConfig scfg;
  scfg.depth_limit = depth;

  std::vector<EvalResult> oracle;
  std::vector<Term> values;
  for (const auto& t : terms) {
    oracle.push_back(reference_eval(t, cfg));
    if (oracle.back().kind == EvalResult::Value &&
        std::find(values.begin(), values.end(), oracle.back().term) == values.end())
      values.push_back(oracle.back().term);
  }

  for (std::size_t i = 0; i < terms.size(); ++i) {
    const Term& e = terms[i];
    const EvalResult& o = oracle[i];
    if (o.kind == EvalResult::Stuck) {
      rep.skipped.push_back(e);
      continue;
    }
    ++rep.checked;
    Term v = Term::fresh_var("V");
    SolveResult res = solver.solve(Atom("eval", {e, v}), scfg);
    if (o.kind == EvalResult::Bottom) {
      if (!is_depth_exceeded(res.outcome))
        rep.violations.push_back({3, e, std::string("oracle diverges but solve gave ") +
                                            outcome_name(res.outcome)});
      continue;
    }
    if (!is_proved(res.outcome)) {
      rep.violations.push_back(
          {1, e, "expected " + print_term(o.term) + ", solve gave " + outcome_name(res.outcome)});
    } else {
      Term got = apply_subst(std::get<Proved>(res.outcome).answer, v);
      if (!(got == o.term))
        rep.violations.push_back({1, e, "expected " + print_term(o.term) + ", derived " + print_term(got)});
    }
    std::size_t taken = 0;
    for (std::size_t k = 1; k <= values.size() && taken < wrong_samples; ++k) {
      const Term& w = values[(i + k) % values.size()];
      if (w == o.term) continue;
      ++taken;
      SolveResult wr = solver.solve(Atom("eval", {e, w}), scfg);
      if (!is_failure(wr.outcome))
        rep.violations.push_back({2, e, "wrong value " + print_term(w) + " gave " + outcome_name(wr.outcome)});
    }
  }
  return rep;
}

std::string format_report(const ConformanceReport& r) {
  std::ostringstream os;
  for (const auto& v : r.violations)
    os << "condition " << v.condition << ": " << print_term(v.term) << ": " << v.detail << '\n';
  for (const auto& s : r.skipped) os << "skipped (stuck): " << print_term(s) << '\n';
  os << "checked " << r.checked << ", skipped " << r.skipped.size() << ", violations "
     << r.violations.size() << '\n';
  return os.str();
}

std::map<std::string, ScenarioSpec> builtin_scenarios() {
  std::map<std::string, ScenarioSpec> out;
  for (const auto& [name, text] : detail::embedded_scenario_texts()) out.emplace(name, parse_scenario(text));
  return out;
}

std::string builtin_scenario_text(const std::string& name) {
  for (const auto& [n, text] : detail::embedded_scenario_texts())
    if (n == name) return text;
  throw std::invalid_argument("no builtin scenario named '" + name + "'");
}

std::vector<std::string> builtin_scenario_names() {
  std::vector<std::string> out;
  for (const auto& [n, text] : detail::embedded_scenario_texts()) out.push_back(n);
  return out;
}

}  // namespace milsem
