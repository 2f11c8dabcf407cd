#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "milsem/scenario.hpp"
#include "milsem/solver.hpp"
#include "milsem/term.hpp"

namespace milsem {

// Object terms are ordinary Terms over var/1, lam/2, app/2, pair/2, fst/1,
// snd/1, cons/2, nil, head/1, tail/1, if/2, thenelse/2, true, false, lit/1
// and add/2. Object variables and binders are nullary names: var(x), lam(x,B).

/// True for a nullary compound usable as an object variable name.
bool is_name(const Term& t);

/// `base` if unused, else the first of base1, base2, ... not in `avoid`.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

std::set<std::string> free_vars(const Term& t);

/// Capture-avoiding substitution of `v` for var(x) in `t`. Throws
/// BuiltinError on non-ground input or a malformed var/lam.
Term substitute(const Term& v, const std::string& x, const Term& t);

bool is_value(const Term& t);

enum class Strategy : std::uint8_t { Lazy, Eager };

const char* strategy_name(Strategy s);
Strategy parse_strategy(const std::string& s);  // throws std::invalid_argument

/// Which application rules the background knowledge carries.
enum class BkVariant : std::uint8_t {
  Lazy,   // call-by-name beta and left congruence
  Eager,  // call-by-value beta and both congruences, left to right
  NoApp,  // none; application rules are left to be learned
};

/// eval/2, value/1 base facts, the app rules of `variant`, arithmetic on
/// lit/add, and the selectors left/3 and right/3.
Program base_bk(BkVariant variant);

/// substitute/4 and plus/3.
BuiltinTable object_builtins();

struct OracleConfig {
  Strategy strategy = Strategy::Eager;
  std::uint64_t fuel = 10000;  // maximum reduction steps
};

struct StepResult {
  enum Kind : std::uint8_t { Value, Step, Stuck };
  Kind kind;
  Term next;  // Step only
};

/// One reduction step of the reference semantics.
StepResult reference_step(const Term& t, Strategy strategy);

struct EvalResult {
  enum Kind : std::uint8_t { Value, Bottom, Stuck };
  Kind kind = Bottom;
  Term term;            // the value, or the stuck subterm's enclosing term
  std::uint64_t steps = 0;
};

/// Hand-written evaluator used as the test oracle. Values evaluate to
/// themselves regardless of fuel; fuel exhaustion yields Bottom.
EvalResult reference_eval(const Term& t, const OracleConfig& cfg);

struct Violation {
  int condition = 0;  // 1: value not derived, 2: wrong value derivable, 3: divergence not detected
  Term term;
  std::string detail;
};

struct ConformanceReport {
  std::size_t checked = 0;
  std::vector<Term> skipped;  // stuck under the oracle
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Compares eval/2 under `p` with reference_eval on every term. Wrong values
/// for the second condition are drawn from the other terms' oracle values.
ConformanceReport conformance_check(const Program& p, const std::vector<Term>& terms,
                                    const OracleConfig& cfg, std::uint32_t depth,
                                    std::size_t wrong_samples = 3);

std::string format_report(const ConformanceReport& r);

/// The shipped scenario bundles by name: pairs, lists, conditionals,
/// lazy_eager (the discriminating term tagged nonterm) and lazy (tagged pos).
std::map<std::string, ScenarioSpec> builtin_scenarios();
std::string builtin_scenario_text(const std::string& name);
std::vector<std::string> builtin_scenario_names();

// ---- random object terms ----

enum Construct : unsigned {
  kLambda = 1u << 0,
  kPairs = 1u << 1,
  kLists = 1u << 2,
  kConditionals = 1u << 3,
  kArith = 1u << 4,
  kAll = 0x1f,
};

struct TermGenOptions {
  unsigned constructs = kAll;
  int max_depth = 4;
  std::vector<std::string> names = {"x", "y", "z"};
};

/// Arbitrary object term; may be stuck, divergent, or open.
Term random_object_term(std::mt19937_64& rng, const TermGenOptions& opts);

/// Terms the oracle evaluates to a value within `cfg.fuel`, built from
/// `opts.constructs` and containing at least one of `required` (0 = any).
std::vector<Term> random_evaluating_terms(std::mt19937_64& rng, std::size_t count,
                                          const TermGenOptions& opts, unsigned required,
                                          const OracleConfig& cfg);

/// Which constructs occur in `t`, judged by the forms that need rules
/// (app, pair/fst/snd, cons/head/tail, if, add); bare values do not count.
unsigned constructs_of(const Term& t);

/// Closed values built from `constructs`.
Term random_value(std::mt19937_64& rng, const TermGenOptions& opts, int depth);

}  // namespace milsem
