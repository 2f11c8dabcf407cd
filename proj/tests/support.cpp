#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace milsem::testing {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string data_path(const std::string& rel) { return std::string(MILSEM_DATA_DIR) + "/" + rel; }
std::string fixture_path(const std::string& rel) { return std::string(MILSEM_FIXTURE_DIR) + "/" + rel; }

ScenarioSpec load_scenario(const std::string& name) {
  return parse_scenario(read_text(data_path("scenarios/" + name + ".pls")));
}

std::vector<Term> load_corpus(const std::string& name) {
  return parse_term_lines(read_text(data_path("corpus/" + name + ".terms")));
}

Term t(const std::string& text) { return parse_term(text); }
Atom a(const std::string& text) { return parse_atom(text); }
Program prog(const std::string& text) { return parse_program(text); }

Program learned_program(const ScenarioSpec& spec, const LearnResult& r) {
  Program p = spec.bk;
  if (r.hypothesis) p.append(r.hypothesis->program());
  return p;
}

std::string eval_signature(const Program& p, const Term& term, std::uint32_t depth) {
  Term v = Term::fresh_var("V");
  SolveConfig cfg;
  cfg.depth_limit = depth;
  SolveResult r = solve(p, object_builtins(), Atom("eval", {term, v}), cfg);
  std::string s = outcome_name(r.outcome);
  if (is_proved(r.outcome)) s += " " + print_term(apply_subst(std::get<Proved>(r.outcome).answer, v));
  return s;
}

std::vector<std::string> step_answers(const Program& p, const Term& s, std::uint32_t depth) {
  Term x = Term::fresh_var("X");
  SolveConfig cfg;
  cfg.depth_limit = depth;
  cfg.find_all = true;
  SolveResult r = solve(p, object_builtins(), Atom("step", {s, x}), cfg);
  std::vector<std::string> out;
  for (const auto& ans : r.answers) out.push_back(print_term(apply_subst(ans, x)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (is_depth_exceeded(r.outcome)) out.push_back("<depth>");
  return out;
}

// ---- forward chaining ----

namespace {

void collect_constants(const Term& x, std::set<std::string>& out) {
  if (x.is_compound()) {
    if (x.arity() == 0) out.insert(x.name());
    for (const auto& arg : x.args()) collect_constants(arg, out);
  }
}

Term ground(const Term& x, const std::map<VarId, Term>& env) {
  if (x.is_var()) return env.at(x.var_id());
  if (!x.is_compound() || x.arity() == 0) return x;
  std::vector<Term> args;
  for (const auto& arg : x.args()) args.push_back(ground(arg, env));
  return Term::compound(x.functor(), std::move(args));
}

std::string key(const Atom& at, const std::map<VarId, Term>& env) {
  std::vector<Term> args;
  for (const auto& arg : at.args) args.push_back(ground(arg, env));
  return print_atom(Atom(at.pred, std::move(args)));
}

template <class F>
void each_grounding(const std::vector<Term>& vars, const std::vector<Term>& universe, std::size_t i,
                    std::map<VarId, Term>& env, F&& f) {
  if (i == vars.size()) {
    f(env);
    return;
  }
  for (const auto& c : universe) {
    env[vars[i].var_id()] = c;
    each_grounding(vars, universe, i + 1, env, f);
  }
}

const char* kConsts[] = {"a", "b", "c"};

Term random_arg(std::mt19937_64& rng, const std::vector<Term>& vars, bool allow_s) {
  int k = std::uniform_int_distribution<int>(0, allow_s ? 6 : 5)(rng);
  if (k < 3) return vars[static_cast<std::size_t>(k)];
  if (k < 6) return Term::constant(kConsts[k - 3]);
  return Term::compound("s", {vars[std::uniform_int_distribution<std::size_t>(0, 2)(rng)]});
}

Atom random_atom(std::mt19937_64& rng, const std::vector<Term>& vars, bool allow_s) {
  static const Symbol preds[] = {{"p", 1}, {"q", 2}, {"r", 2}};
  const Symbol& s = preds[std::uniform_int_distribution<int>(0, 2)(rng)];
  std::vector<Term> args;
  for (std::uint32_t i = 0; i < s.arity; ++i) args.push_back(random_arg(rng, vars, allow_s));
  return Atom(s, std::move(args));
}

Atom random_fact(std::mt19937_64& rng) {
  std::vector<Term> consts{Term::constant("a"), Term::constant("b"), Term::constant("c")};
  return random_atom(rng, consts, false);
}

}  // namespace

GroundModel least_model(const Program& p) {
  std::set<std::string> names;
  for (const auto& c : p.clauses) {
    collect_constants(c.head.as_term(), names);
    for (const auto& b : c.body) collect_constants(b.as_term(), names);
  }
  std::vector<Term> universe;
  for (const auto& n : names) universe.push_back(Term::constant(n));

  struct Ground {
    std::string head;
    std::vector<std::string> body;
  };
  std::vector<Ground> rules;
  for (const auto& c : p.clauses) {
    std::vector<Term> vars = variables_of(c);
    std::map<VarId, Term> env;
    each_grounding(vars, universe, 0, env, [&](const std::map<VarId, Term>& e) {
      Ground g{key(c.head, e), {}};
      for (const auto& b : c.body) g.body.push_back(key(b, e));
      rules.push_back(std::move(g));
    });
  }

  GroundModel m;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& g : rules) {
      std::uint32_t total = 1;
      bool ok = true;
      for (const auto& b : g.body) {
        auto it = m.cost.find(b);
        if (it == m.cost.end()) {
          ok = false;
          break;
        }
        total += it->second;
      }
      if (!ok) continue;
      auto it = m.cost.find(g.head);
      if (it == m.cost.end() || total < it->second) {
        m.cost[g.head] = total;
        changed = true;
      }
    }
  }
  return m;
}

Program random_datalog(std::mt19937_64& rng) {
  Program p;
  std::uniform_int_distribution<int> nfacts(2, 5), nrules(1, 3), nbody(1, 2);
  std::vector<Clause> clauses;
  for (int i = nfacts(rng); i > 0; --i) clauses.push_back(Clause{random_fact(rng), {}});
  for (int i = nrules(rng); i > 0; --i) {
    std::vector<Term> vars{Term::fresh_var("X"), Term::fresh_var("Y"), Term::fresh_var("Z")};
    Clause c;
    for (int j = nbody(rng); j > 0; --j) c.body.push_back(random_atom(rng, vars, false));
    std::vector<Term> bound;
    for (const auto& b : c.body)
      for (const auto& v : variables_of(b.as_term()))
        if (std::find(bound.begin(), bound.end(), v) == bound.end()) bound.push_back(v);
    // Range restriction keeps the least model finite and ground.
    c.head = random_fact(rng);
    for (auto& arg : c.head.args)
      if (!bound.empty() && rng() % 3 != 0) arg = bound[rng() % bound.size()];
    clauses.push_back(std::move(c));
  }
  std::shuffle(clauses.begin(), clauses.end(), rng);
  p.clauses = std::move(clauses);
  return p;
}

Program random_small_program(std::mt19937_64& rng) {
  Program p;
  std::uniform_int_distribution<int> n(1, 5), nbody(0, 2);
  for (int i = n(rng); i > 0; --i) {
    std::vector<Term> vars{Term::fresh_var("X"), Term::fresh_var("Y"), Term::fresh_var("Z")};
    Clause c;
    c.head = random_atom(rng, vars, true);
    for (int j = nbody(rng); j > 0; --j) c.body.push_back(random_atom(rng, vars, true));
    p.add(std::move(c));
  }
  return p;
}

Atom random_query(std::mt19937_64& rng, bool ground_only) {
  std::vector<Term> vars{Term::fresh_var("A"), Term::fresh_var("B"), Term::fresh_var("C")};
  if (ground_only) return random_fact(rng);
  return random_atom(rng, vars, false);
}

std::vector<Atom> all_ground_queries() {
  std::vector<Atom> out;
  for (const char* x : kConsts) {
    out.push_back(Atom("p", {Term::constant(x)}));
    for (const char* y : kConsts) {
      out.push_back(Atom("q", {Term::constant(x), Term::constant(y)}));
      out.push_back(Atom("r", {Term::constant(x), Term::constant(y)}));
    }
  }
  return out;
}

// ---- object terms ----

namespace {

Term de_bruijn(const Term& x, std::vector<std::string>& scope) {
  if (!x.is_compound()) return x;
  if (x.name() == "var" && x.arity() == 1) {
    const std::string& n = x.arg(0).name();
    for (std::size_t i = scope.size(); i-- > 0;)
      if (scope[i] == n) return Term::compound("bound", {Term::integer(static_cast<std::int64_t>(scope.size() - 1 - i))});
    return Term::compound("free", {x.arg(0)});
  }
  if (x.name() == "lam" && x.arity() == 2) {
    scope.push_back(x.arg(0).name());
    Term body = de_bruijn(x.arg(1), scope);
    scope.pop_back();
    return Term::compound("lam", {body});
  }
  std::vector<Term> args;
  for (const auto& arg : x.args()) args.push_back(de_bruijn(arg, scope));
  return Term::compound(x.functor(), std::move(args));
}

void names_in(const Term& x, std::set<std::string>& out) {
  if (!x.is_compound()) return;
  if (x.arity() == 0) out.insert(x.name());
  for (const auto& arg : x.args()) names_in(arg, out);
}

Term freshen(const Term& x, std::map<std::string, std::string>& scope, std::set<std::string>& avoid) {
  if (!x.is_compound()) return x;
  if (x.name() == "var" && x.arity() == 1) {
    auto it = scope.find(x.arg(0).name());
    return it == scope.end() ? x : Term::compound("var", {Term::constant(it->second)});
  }
  if (x.name() == "lam" && x.arity() == 2) {
    std::string b = x.arg(0).name();
    std::string fresh = fresh_name("w", avoid);
    avoid.insert(fresh);
    auto saved = scope;
    scope[b] = fresh;
    Term body = freshen(x.arg(1), scope, avoid);
    scope = std::move(saved);
    return Term::compound("lam", {Term::constant(fresh), body});
  }
  std::vector<Term> args;
  for (const auto& arg : x.args()) args.push_back(freshen(arg, scope, avoid));
  return Term::compound(x.functor(), std::move(args));
}

Term replace_var(const Term& x, const std::string& name, const Term& v) {
  if (!x.is_compound()) return x;
  if (x.name() == "var" && x.arity() == 1 && x.arg(0).name() == name) return v;
  std::vector<Term> args;
  for (const auto& arg : x.args()) args.push_back(replace_var(arg, name, v));
  return Term::compound(x.functor(), std::move(args));
}

}  // namespace

bool object_alpha_equivalent(const Term& x, const Term& y) {
  std::vector<std::string> s1, s2;
  return de_bruijn(x, s1) == de_bruijn(y, s2);
}

Term naive_substitute_after_freshening(const Term& v, const std::string& x, const Term& body) {
  std::set<std::string> avoid{x};
  names_in(v, avoid);
  names_in(body, avoid);
  std::map<std::string, std::string> scope;
  return replace_var(freshen(body, scope, avoid), x, v);
}

Term random_term_for_substitution(std::mt19937_64& rng) {
  TermGenOptions opts;
  opts.max_depth = std::uniform_int_distribution<int>(1, 5)(rng);
  return random_object_term(rng, opts);
}

}  // namespace milsem::testing
