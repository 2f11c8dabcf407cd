#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "milsem/mil.hpp"
#include "milsem/object_lang.hpp"
#include "milsem/solver.hpp"
#include "milsem/textio.hpp"

namespace milsem::testing {

std::string read_text(const std::string& path);
std::string data_path(const std::string& rel);       // under data/
std::string fixture_path(const std::string& rel);    // under tests/data/
ScenarioSpec load_scenario(const std::string& name);  // data/scenarios/<name>.pls
std::vector<Term> load_corpus(const std::string& name);

Term t(const std::string& text);
Atom a(const std::string& text);
Program prog(const std::string& text);

/// Program of a learned scenario: its bk followed by the induced clauses.
Program learned_program(const ScenarioSpec& spec, const LearnResult& r);

/// Result of eval(term, V): the outcome name and, when proved, the value.
std::string eval_signature(const Program& p, const Term& term, std::uint32_t depth = 300);

/// Sorted printed answers of step(s, X) with find_all.
std::vector<std::string> step_answers(const Program& p, const Term& s, std::uint32_t depth = 300);

// ---- function-free programs and the forward-chaining oracle ----

struct GroundModel {
  std::map<std::string, std::uint32_t> cost;  // atom -> fewest resolution steps in any proof
};

/// Least model of a function-free program over its own constants, with the
/// cheapest proof size of every atom (each clause application costs 1).
GroundModel least_model(const Program& p);

/// Small random function-free program over p/1, q/2, r/2 and constants a, b, c.
Program random_datalog(std::mt19937_64& rng);

/// Small random program that may use s/1 and recursion; for monotonicity checks.
Program random_small_program(std::mt19937_64& rng);

/// Random query over the predicates of random_small_program / random_datalog.
Atom random_query(std::mt19937_64& rng, bool ground_only);

/// Every ground atom over p/1, q/2, r/2 and a, b, c.
std::vector<Atom> all_ground_queries();

// ---- object-term oracles ----

/// Alpha-equivalence of object terms (lam binders), via de Bruijn conversion.
bool object_alpha_equivalent(const Term& x, const Term& y);

/// Renames every binder of `t` to a globally fresh name, then replaces every
/// var(x) by `v`.
Term naive_substitute_after_freshening(const Term& v, const std::string& x, const Term& t);

/// Closed or open well-formed object term for property suites.
Term random_term_for_substitution(std::mt19937_64& rng);

}  // namespace milsem::testing
