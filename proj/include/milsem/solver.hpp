#pragma once

#include <chrono>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <variant>
#include <vector>

#include "milsem/term.hpp"

namespace milsem {

struct Proved {
  Substitution answer;  // restricted to the goal's variables
};
struct FiniteFailure {};
struct DepthExceeded {};

using Outcome = std::variant<Proved, FiniteFailure, DepthExceeded>;

const char* outcome_name(const Outcome& o);
inline bool is_proved(const Outcome& o) { return std::holds_alternative<Proved>(o); }
inline bool is_failure(const Outcome& o) { return std::holds_alternative<FiniteFailure>(o); }
inline bool is_depth_exceeded(const Outcome& o) { return std::holds_alternative<DepthExceeded>(o); }

/// Raised by a builtin on ill-formed input. Never folded into failure.
class BuiltinError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wall-clock budget ran out during a solve.
class SolveTimeout : public std::runtime_error {
 public:
  SolveTimeout() : std::runtime_error("time budget exhausted") {}
};

/// A native relation. Receives the selected goal with all current bindings
/// applied and returns the substitutions (over the goal's variables) under
/// which it holds, in order.
using BuiltinFn = std::function<std::vector<Substitution>(const Atom& goal)>;

class BuiltinTable {
 public:
  /// Throws std::invalid_argument when `sym` is already registered.
  void add(const Symbol& sym, BuiltinFn fn);
  const BuiltinFn* find(const Symbol& sym) const;
  bool contains(const Symbol& sym) const { return find(sym) != nullptr; }
  std::vector<Symbol> symbols() const;

 private:
  std::unordered_map<Symbol, BuiltinFn, SymbolHash> fns_;
};

BuiltinTable register_builtin(BuiltinTable table, const Symbol& sym, BuiltinFn fn);

struct SolveConfig {
  std::uint32_t depth_limit = 300;  // resolution steps per derivation branch
  bool find_all = false;
  std::ostream* trace = nullptr;
  OccursCheck occurs = OccursCheck::Off;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct SolveStats {
  std::uint64_t nodes = 0;    // resolution steps attempted
  std::uint64_t answers = 0;  // answers found within the bound
  bool depth_cut = false;
};

struct SolveResult {
  Outcome outcome = FiniteFailure{};
  std::vector<Substitution> answers;  // all answers when find_all, else at most one
  SolveStats stats;
};

/// Depth-bounded SLD resolution: leftmost selection, program-order clauses,
/// chronological backtracking. Each clause application or builtin call costs
/// one unit of depth on the current branch.
class Solver {
 public:
  Solver(const Program& program, BuiltinTable builtins);
  ~Solver();
  Solver(Solver&&) noexcept;
  Solver& operator=(Solver&&) noexcept;

  /// Appends clauses after the existing ones.
  void add_clauses(const Program& extra);

  SolveResult solve(const Atom& goal, const SolveConfig& cfg = {}) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SolveResult solve(const Program& p, const BuiltinTable& builtins, const Atom& goal,
                  const SolveConfig& cfg = {});

}  // namespace milsem
