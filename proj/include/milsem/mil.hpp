#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "milsem/scenario.hpp"
#include "milsem/solver.hpp"
#include "milsem/term.hpp"

namespace milsem {

/// Ordered set of metasubs plus the clauses they denote.
struct Hypothesis {
  std::vector<Metasub> metasubs;  // canonical (sorted) order
  std::vector<Clause> clauses;    // clauses[i] instantiates metasubs[i]

  std::size_t size() const { return metasubs.size(); }
  Program program() const { return Program{clauses}; }
};

/// Builds a canonical hypothesis: sorts and deduplicates `subs`.
Hypothesis make_hypothesis(const ScenarioSpec& spec, std::vector<Metasub> subs);

enum class LearnStatus : std::uint8_t { Found, NoHypothesis, Timeout };

const char* status_name(LearnStatus s);

struct LearnStats {
  std::uint64_t nodes = 0;       // meta-resolution steps
  std::uint64_t candidates = 0;  // hypotheses that proved every positive example
  double millis = 0;
  std::vector<std::uint32_t> sizes_tried;
};

struct LearnResult {
  LearnStatus status = LearnStatus::NoHypothesis;
  std::optional<Hypothesis> hypothesis;
  LearnStats stats;
};

struct LearnConfig {
  /// Skip re-checking hypotheses already rejected under another clause order.
  bool prune_duplicates = true;
  /// Searches sizes from here rather than from 0.
  std::uint32_t min_size = 0;
  /// Overrides spec.options.max_clauses when set.
  std::optional<std::uint32_t> max_size;
  /// Called for every candidate that proves all positives; return true to stop.
  std::function<bool(const Hypothesis&, bool passed)> on_candidate;
};

LearnResult learn(const ScenarioSpec& spec, const BuiltinTable& builtins, const LearnConfig& cfg = {});

/// Whether `e` holds under bk ∪ h with learning disabled.
bool check_example(const Hypothesis& h, const ScenarioSpec& spec, const BuiltinTable& builtins,
                   const Example& e);

/// All three example checks for a candidate.
bool check_hypothesis(const Hypothesis& h, const ScenarioSpec& spec, const BuiltinTable& builtins);

struct TaskResult {
  std::string name;
  LearnResult result;
};

struct SequenceResult {
  Program program;  // union of every task's bk and all induced clauses
  std::vector<TaskResult> tasks;
  std::optional<std::size_t> failed_task;  // index of the first task without a hypothesis
  bool ok() const { return !failed_task; }
};

/// Learns the tasks in order, each with its bk extended by all clauses induced
/// so far. Stops at the first task that fails.
SequenceResult learn_seq(const std::vector<std::pair<std::string, ScenarioSpec>>& tasks,
                         const BuiltinTable& builtins, const LearnConfig& cfg = {});

/// Allocates invented predicate names pred_1, pred_2, ... that avoid `reserved`.
class InventionCounter {
 public:
  explicit InventionCounter(std::uint32_t start = 0) : next_(start) {}
  static InventionCounter after(const Program& bk);
  Symbol invent(std::uint32_t arity) { return Symbol{"pred_" + std::to_string(++next_), arity}; }
  std::uint32_t issued() const { return next_; }

 private:
  std::uint32_t next_;
};

inline Symbol invent_predicate(InventionCounter& counter, std::uint32_t arity) {
  return counter.invent(arity);
}

bool is_invented_name(const std::string& name);

struct Pools {
  std::vector<Symbol> head_preds;
  std::vector<Symbol> body_preds;
  std::vector<Symbol> funcs;
  std::vector<MetaValue> consts;
};

/// Pools derived from a scenario: declared predicates, func_pool, and the
/// constants (nullary pool symbols then example integers).
Pools pools_of(const ScenarioSpec& spec);

/// Every instantiation of `m` whose head unifies with `goal`, with predicate,
/// function and constant metavariables drawn from `pools`. Clauses are renamed
/// apart.
std::vector<std::pair<Clause, Metasub>> instantiate_metarule(const Metarule& m, const Atom& goal,
                                                             const Pools& pools);

/// One successor of a meta-proof step.
struct MetaState {
  Substitution subst;
  std::vector<Metasub> hypothesis;
  std::uint32_t depth = 0;
  std::uint32_t invented = 0;
};

/// Proves `goal` with learning enabled, calling `emit` for each successful
/// final state (stop by returning true). `start` supplies the hypothesis
/// already assumed; `max_size` bounds its growth.
void meta_prove(const Atom& goal, const MetaState& start, const ScenarioSpec& spec,
                const BuiltinTable& builtins, std::uint32_t max_size,
                const std::function<bool(const MetaState&)>& emit);

}  // namespace milsem
