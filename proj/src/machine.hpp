#pragma once

// Internal resolution substrate: a cell heap with a binding trail, compiled
// clause code, and the conversions to and from public Terms. Shared by the
// solver and the meta-interpreter; not part of the installed interface.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "milsem/solver.hpp"
#include "milsem/term.hpp"

namespace milsem::detail {

using CellIdx = std::uint32_t;
using FunctorId = std::uint32_t;

inline constexpr std::uint32_t kNil = std::numeric_limits<std::uint32_t>::max();

enum class Tag : std::uint8_t { Ref, Int, Str };

// Ref: val is the target cell (itself when unbound). Str: fn, arity and
// val = index of the first argument cell; arguments are contiguous. Int: val.
struct Cell {
  Tag tag;
  std::uint16_t ar = 0;
  FunctorId fn;
  std::int64_t val;
};

class FunctorTable {
 public:
  FunctorId intern(const Symbol& s);
  std::optional<FunctorId> find(const Symbol& s) const;
  const Symbol& symbol(FunctorId id) const { return symbols_[id]; }
  std::uint32_t arity(FunctorId id) const { return symbols_[id].arity; }
  std::size_t size() const { return symbols_.size(); }

 private:
  std::vector<Symbol> symbols_;
  std::unordered_map<Symbol, FunctorId, SymbolHash> ids_;
};

// Preorder term code. Var: a = clause-local slot. Str: a = functor id,
// followed by its arguments. Int: v.
struct TNode {
  enum Kind : std::uint8_t { Var, Int, Str };
  Kind kind;
  std::uint32_t a;
  std::int64_t v;
};

struct FirstArgKey {
  enum Kind : std::uint8_t { Any, Str, Int };
  Kind kind = Any;
  std::int64_t v = 0;
};

struct ClauseCode {
  FunctorId pred = 0;
  std::uint32_t nvars = 0;
  std::vector<TNode> head;               // argument codes, concatenated
  std::vector<std::vector<TNode>> body;  // each a whole atom (Str node first)
  FirstArgKey key;
  std::size_t id = 0;                    // position in the source program
};

class Heap;

/// Compiles public clauses; variables become clause-local slots.
class ClauseCompiler {
 public:
  explicit ClauseCompiler(FunctorTable& ft) : ft_(ft) {}
  ClauseCode compile(const Clause& c, std::size_t id);
  void term(const Term& t, std::vector<TNode>& out);

 private:
  FunctorTable& ft_;
  std::unordered_map<VarId, std::uint32_t> slots_;
};

/// Clauses indexed by predicate, in program order.
struct ClauseDb {
  FunctorTable functors;
  std::vector<ClauseCode> clauses;
  std::vector<std::vector<std::uint32_t>> by_pred;

  void add(const Clause& c);
  void add_all(const Program& p) {
    for (const auto& c : p.clauses) add(c);
  }
  std::span<const std::uint32_t> clauses_for(FunctorId pred) const {
    if (pred >= by_pred.size()) return {};
    return by_pred[pred];
  }
};

class Heap {
 public:
  struct Mark {
    std::uint32_t cells;
    std::uint32_t trail;
  };

  Heap() { cells_.reserve(1 << 16); }

  Cell& operator[](CellIdx i) { return cells_[i]; }
  const Cell& operator[](CellIdx i) const { return cells_[i]; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(cells_.size()); }

  CellIdx new_var() {
    auto i = size();
    cells_.push_back({Tag::Ref, 0, 0, i});
    return i;
  }
  CellIdx new_vars(std::uint32_t n) {
    auto base = size();
    for (std::uint32_t k = 0; k < n; ++k) cells_.push_back({Tag::Ref, 0, 0, base + k});
    return base;
  }
  CellIdx new_int(std::int64_t v) {
    cells_.push_back({Tag::Int, 0, 0, v});
    return size() - 1;
  }
  /// One Str cell followed by `arity` uninitialised argument cells.
  CellIdx new_str(FunctorId fn, std::uint32_t arity) {
    auto i = size();
    cells_.push_back({Tag::Str, static_cast<std::uint16_t>(arity), fn, i + 1});
    cells_.resize(cells_.size() + arity, Cell{Tag::Int, 0, 0, 0});
    return i;
  }
  CellIdx alloc(std::uint32_t n) {
    auto i = size();
    cells_.resize(cells_.size() + n, Cell{Tag::Int, 0, 0, 0});
    return i;
  }

  CellIdx deref(CellIdx i) const {
    while (cells_[i].tag == Tag::Ref && static_cast<CellIdx>(cells_[i].val) != i)
      i = static_cast<CellIdx>(cells_[i].val);
    return i;
  }
  bool unbound(CellIdx i) const {
    return cells_[i].tag == Tag::Ref && static_cast<CellIdx>(cells_[i].val) == i;
  }

  void bind(CellIdx var, CellIdx target) {
    cells_[var].val = target;
    trail_.push_back(var);
  }

  Mark mark() const { return {size(), static_cast<std::uint32_t>(trail_.size())}; }
  void undo(Mark m) {
    while (trail_.size() > m.trail) {
      CellIdx v = trail_.back();
      trail_.pop_back();
      cells_[v] = {Tag::Ref, 0, 0, v};
    }
    cells_.resize(m.cells);
  }

  bool unify(CellIdx a, CellIdx b, bool occurs_check = false);
  bool occurs(CellIdx var, CellIdx t) const;

  /// Writes `code` (one subterm, advancing `p`) into `slot`.
  void build(const TNode*& p, CellIdx slot, CellIdx var_base, const FunctorTable& ft);
  /// Builds an atom from code whose first node is its Str.
  CellIdx build_atom(const std::vector<TNode>& code, CellIdx var_base, const FunctorTable& ft);
  /// Unifies one subterm of code against heap term `t`, building where `t` is unbound.
  bool unify_code(const TNode*& p, CellIdx t, CellIdx var_base, const FunctorTable& ft);

  /// Loads a public term; `vars` maps its variables to cells (extended as needed).
  CellIdx load(const Term& t, std::unordered_map<VarId, CellIdx>& vars, FunctorTable& ft);
  void load_into(const Term& t, CellIdx slot, std::unordered_map<VarId, CellIdx>& vars,
                 FunctorTable& ft);
  /// Reads a heap term back; unbound cells become variables recorded in `vars`.
  Term extract(CellIdx i, std::unordered_map<CellIdx, Term>& vars, const FunctorTable& ft) const;

 private:
  Term extract_rec(CellIdx i, std::unordered_map<CellIdx, Term>& vars, const FunctorTable& ft,
                   std::vector<CellIdx>& path) const;

  std::vector<Cell> cells_;
  std::vector<CellIdx> trail_;
};

void skip_code(const TNode*& p, const FunctorTable& ft);

/// Runs a builtin on the goal at `atom`; `k` is invoked once per answer with
/// its bindings in place and returns true to stop.
bool call_builtin(Heap& heap, FunctorTable& ft, CellIdx atom, const BuiltinFn& fn,
                  const std::function<bool()>& k);

/// False when the clause's first head argument cannot match the goal's.
bool first_arg_compatible(const Heap& heap, CellIdx atom, const ClauseCode& c);

}  // namespace milsem::detail
