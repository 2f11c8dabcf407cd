#include "milsem/solver.hpp"

#include <algorithm>
#include <ostream>

#include "machine.hpp"
#include "milsem/textio.hpp"

namespace milsem {

using namespace detail;

const char* outcome_name(const Outcome& o) {
  if (is_proved(o)) return "Proved";
  if (is_failure(o)) return "FiniteFailure";
  return "DepthExceeded";
}

void BuiltinTable::add(const Symbol& sym, BuiltinFn fn) {
  if (!fns_.try_emplace(sym, std::move(fn)).second)
    throw std::invalid_argument("builtin already registered: " + sym.str());
}

const BuiltinFn* BuiltinTable::find(const Symbol& sym) const {
  auto it = fns_.find(sym);
  return it == fns_.end() ? nullptr : &it->second;
}

std::vector<Symbol> BuiltinTable::symbols() const {
  std::vector<Symbol> out;
  for (const auto& [s, f] : fns_) out.push_back(s);
  std::sort(out.begin(), out.end());
  return out;
}

BuiltinTable register_builtin(BuiltinTable table, const Symbol& sym, BuiltinFn fn) {
  table.add(sym, std::move(fn));
  return table;
}

namespace detail {

bool call_builtin(Heap& heap, FunctorTable& ft, CellIdx atom, const BuiltinFn& fn,
                  const std::function<bool()>& k) {
  std::unordered_map<CellIdx, Term> seen;
  Atom goal = Atom::from_term(heap.extract(atom, seen, ft));
  std::unordered_map<VarId, CellIdx> cell_of;
  for (const auto& [cell, var] : seen) cell_of.emplace(var.var_id(), cell);
  auto answers = fn(goal);
  for (const auto& s : answers) {
    auto m = heap.mark();
    bool ok = true;
    auto vars = cell_of;
    for (const auto& [cell, var] : seen) {
      const Term* t = s.lookup(var.var_id());
      if (!t) continue;
      CellIdx c = heap.load(apply_subst(s, *t), vars, ft);
      if (!heap.unify(cell, c)) {
        ok = false;
        break;
      }
    }
    if (ok && k()) return true;
    heap.undo(m);
  }
  return false;
}

bool first_arg_compatible(const Heap& heap, CellIdx atom, const ClauseCode& c) {
  if (c.key.kind == FirstArgKey::Any) return true;
  const Cell& a = heap[atom];
  if (a.ar == 0) return true;
  CellIdx arg = heap.deref(static_cast<CellIdx>(a.val));
  const Cell& x = heap[arg];
  if (heap.unbound(arg)) return true;
  if (c.key.kind == FirstArgKey::Str) return x.tag == Tag::Str && x.fn == c.key.v;
  return x.tag == Tag::Int && x.val == c.key.v;
}

}  // namespace detail

struct Solver::Impl {
  ClauseDb db;
  BuiltinTable builtins;
};

namespace {

struct GoalNode {
  CellIdx atom;
  std::uint32_t next;
};

class Run {
 public:
  Run(const ClauseDb& db, const BuiltinTable& builtins, const SolveConfig& cfg)
      : db_(db), builtins_(builtins), cfg_(cfg), ft_(db.functors) {}

  SolveResult go(const Atom& goal) {
    std::unordered_map<VarId, CellIdx> vars;
    CellIdx g = heap_.load(goal.as_term(), vars, ft_);
    query_vars_ = variables_of(goal.as_term());
    var_cells_ = std::move(vars);
    arena_.push_back({g, kNil});
    solve(0, 0);
    if (!result_.answers.empty()) {
      result_.outcome = Proved{result_.answers.front()};
    } else if (result_.stats.depth_cut) {
      result_.outcome = DepthExceeded{};
    } else {
      result_.outcome = FiniteFailure{};
    }
    return std::move(result_);
  }

 private:
  bool record_answer() {
    ++result_.stats.answers;
    Substitution s;
    std::unordered_map<CellIdx, Term> names;
    for (const auto& v : query_vars_) {
      CellIdx c = var_cells_.at(v.var_id());
      Term t = heap_.extract(c, names, ft_);
      if (!(t.is_var() && t.var_id() == v.var_id())) s.bind(v.var_id(), std::move(t));
    }
    result_.answers.push_back(std::move(s));
    return !cfg_.find_all;
  }

  void tick() {
    ++result_.stats.nodes;
    if (cfg_.deadline && (result_.stats.nodes & 0xfff) == 0 &&
        std::chrono::steady_clock::now() > *cfg_.deadline)
      throw SolveTimeout();
  }

  void trace(std::uint32_t depth, CellIdx atom, const std::string& via) {
    std::unordered_map<CellIdx, Term> names;
    *cfg_.trace << depth << ' ' << print_term(heap_.extract(atom, names, ft_)) << ' ' << via
                << '\n';
  }

  bool solve(std::uint32_t goals, std::uint32_t depth) {
    if (goals == kNil) return record_answer();
    if (depth >= cfg_.depth_limit) {
      result_.stats.depth_cut = true;
      return false;
    }
    const GoalNode node = arena_[goals];
    CellIdx atom = heap_.deref(node.atom);
    if (heap_[atom].tag != Tag::Str) throw BuiltinError("goal is not callable");
    FunctorId pred = heap_[atom].fn;
    auto arena_mark = arena_.size();

    if (const BuiltinFn* fn = builtins_.find(ft_.symbol(pred))) {
      tick();
      if (cfg_.trace) trace(depth + 1, atom, "builtin");
      if (call_builtin(heap_, ft_, atom, *fn, [&] { return solve(node.next, depth + 1); }))
        return true;
    }

    for (std::uint32_t ci : db_.clauses_for(pred)) {
      const ClauseCode& c = db_.clauses[ci];
      if (!first_arg_compatible(heap_, atom, c)) continue;
      tick();
      auto m = heap_.mark();
      CellIdx vb = heap_.new_vars(c.nvars);
      const TNode* p = c.head.data();
      bool ok = true;
      const CellIdx first = static_cast<CellIdx>(heap_[atom].val);
      for (std::uint32_t k = 0; ok && k < heap_[atom].ar; ++k)
        ok = heap_.unify_code(p, first + k, vb, ft_);
      if (ok && cfg_.occurs == OccursCheck::On) ok = acyclic(atom);
      if (ok) {
        if (cfg_.trace) trace(depth + 1, atom, std::to_string(c.id));
        std::uint32_t next = node.next;
        for (auto it = c.body.rbegin(); it != c.body.rend(); ++it) {
          CellIdx b = heap_.build_atom(*it, vb, ft_);
          arena_.push_back({b, next});
          next = static_cast<std::uint32_t>(arena_.size() - 1);
        }
        if (solve(next, depth + 1)) return true;
      }
      heap_.undo(m);
      arena_.resize(arena_mark);
    }
    return false;
  }

  // Sound occurs check applied after head unification: rejects any binding
  // that made the selected goal cyclic.
  bool acyclic(CellIdx root) {
    std::vector<CellIdx> path;
    std::function<bool(CellIdx)> visit = [&](CellIdx c) {
      c = heap_.deref(c);
      const Cell& cell = heap_[c];
      if (cell.tag != Tag::Str) return true;
      for (CellIdx q : path)
        if (q == c) return false;
      path.push_back(c);
      for (std::uint32_t k = 0; k < cell.ar; ++k)
        if (!visit(static_cast<CellIdx>(cell.val) + k)) return false;
      path.pop_back();
      return true;
    };
    return visit(root);
  }

  const ClauseDb& db_;
  const BuiltinTable& builtins_;
  const SolveConfig& cfg_;
  FunctorTable ft_;
  Heap heap_;
  std::vector<GoalNode> arena_;
  std::vector<Term> query_vars_;
  std::unordered_map<VarId, CellIdx> var_cells_;
  SolveResult result_;
};

}  // namespace

Solver::Solver(const Program& program, BuiltinTable builtins)
    : impl_(std::make_unique<Impl>()) {
  impl_->db.add_all(program);
  impl_->builtins = std::move(builtins);
}

Solver::~Solver() = default;
Solver::Solver(Solver&&) noexcept = default;
Solver& Solver::operator=(Solver&&) noexcept = default;

void Solver::add_clauses(const Program& extra) { impl_->db.add_all(extra); }

SolveResult Solver::solve(const Atom& goal, const SolveConfig& cfg) const {
  if (cfg.depth_limit < 1) throw std::invalid_argument("depth_limit must be at least 1");
  Run run(impl_->db, impl_->builtins, cfg);
  return run.go(goal);
}

SolveResult solve(const Program& p, const BuiltinTable& builtins, const Atom& goal,
                  const SolveConfig& cfg) {
  return Solver(p, builtins).solve(goal, cfg);
}

}  // namespace milsem
