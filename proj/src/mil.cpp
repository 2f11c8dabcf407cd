#include "milsem/mil.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <unordered_set>

#include "machine.hpp"

namespace milsem {

using namespace detail;

const char* status_name(LearnStatus s) {
  switch (s) {
    case LearnStatus::Found: return "found";
    case LearnStatus::NoHypothesis: return "no_hypothesis";
    case LearnStatus::Timeout: return "timeout";
  }
  return "?";
}

bool is_invented_name(const std::string& name) {
  if (name.rfind("pred_", 0) != 0 || name.size() == 5) return false;
  return std::all_of(name.begin() + 5, name.end(), [](char c) { return c >= '0' && c <= '9'; });
}

InventionCounter InventionCounter::after(const Program& bk) {
  std::uint32_t top = 0;
  for (const auto& p : bk.predicates())
    if (is_invented_name(p.name)) top = std::max<std::uint32_t>(top, std::stoul(p.name.substr(5)));
  return InventionCounter(top);
}

Hypothesis make_hypothesis(const ScenarioSpec& spec, std::vector<Metasub> subs) {
  std::sort(subs.begin(), subs.end());
  subs.erase(std::unique(subs.begin(), subs.end()), subs.end());
  Hypothesis h;
  for (auto& s : subs) {
    const Metarule* m = spec.find_metarule(s.metarule);
    if (!m) throw std::invalid_argument("unknown metarule " + s.metarule);
    h.clauses.push_back(instantiate(*m, s));
    h.metasubs.push_back(std::move(s));
  }
  return h;
}

Pools pools_of(const ScenarioSpec& spec) {
  Pools p;
  p.head_preds = spec.head_preds;
  p.body_preds = spec.body_preds;
  p.funcs = spec.func_pool;
  for (const auto& f : spec.func_pool)
    if (f.arity == 0) p.consts.emplace_back(f);
  std::set<std::int64_t> ints;
  std::function<void(const Term&)> walk = [&](const Term& t) {
    if (t.is_int()) ints.insert(t.int_value());
    if (t.is_compound())
      for (const auto& a : t.args()) walk(a);
  };
  for (const auto& e : spec.examples)
    for (const auto& a : e.goal.args) walk(a);
  for (auto i : ints) p.consts.emplace_back(i);
  return p;
}

namespace {

using Clock = std::chrono::steady_clock;

struct LearnTimeout {};

bool verdict(const Outcome& o, ExampleTag tag, NegDepthPolicy policy) {
  switch (tag) {
    case ExampleTag::Pos: return is_proved(o);
    case ExampleTag::Neg:
      return is_failure(o) || (is_depth_exceeded(o) && policy == NegDepthPolicy::Accept);
    case ExampleTag::Nonterm: return is_depth_exceeded(o);
  }
  return false;
}

SolveConfig check_config(const ScenarioSpec& spec, std::optional<Clock::time_point> deadline) {
  SolveConfig cfg;
  cfg.depth_limit = spec.options.depth_limit;
  cfg.deadline = deadline;
  return cfg;
}

bool check_all(const Hypothesis& h, const ScenarioSpec& spec, const BuiltinTable& builtins,
               std::optional<Clock::time_point> deadline) {
  Solver solver(spec.bk, builtins);
  solver.add_clauses(h.program());
  auto cfg = check_config(spec, deadline);
  // Cheapest rejections first: negatives, then non-terminating, then positives.
  for (ExampleTag tag : {ExampleTag::Neg, ExampleTag::Nonterm, ExampleTag::Pos})
    for (const auto& e : spec.examples)
      if (e.tag == tag && !verdict(solver.solve(e.goal, cfg).outcome, tag,
                                   spec.options.neg_depth_policy))
        return false;
  return true;
}

struct GoalNode {
  CellIdx atom;
  std::uint32_t next;
};

using Slots = std::vector<std::optional<MetaValue>>;

/// Depth-bounded meta-interpreter over the heap machine. Proves a sequence of
/// root goals (each with its own depth budget), extending the hypothesis
/// with metarule instances where the goal's predicate is learnable.
class Prover {
 public:
  Prover(const ScenarioSpec& spec, const BuiltinTable& builtins, Pools pools)
      : spec_(spec), builtins_(builtins), pools_(std::move(pools)),
        base_(InventionCounter::after(spec.bk).issued()) {
    db_.add_all(spec.bk);
    for (const auto& s : pools_.head_preds) mark_learnable(ft().intern(s));
  }

  std::function<bool()> on_success;
  std::optional<Clock::time_point> deadline;
  std::uint64_t nodes = 0;

  FunctorTable& ft() { return db_.functors; }
  Heap& heap() { return heap_; }
  const std::vector<Metasub>& hypothesis() const { return hyp_; }
  std::uint32_t invented() const { return static_cast<std::uint32_t>(invented_.size()); }

  void assume(const std::vector<Metasub>& subs) {
    for (const auto& s : subs) {
      const Metarule* m = spec_.find_metarule(s.metarule);
      if (!m) throw std::invalid_argument("unknown metarule " + s.metarule);
      hyp_.push_back(s);
      hyp_code_.push_back(&code_for(*m, s));
      mark_learnable(hyp_code_.back()->pred);
    }
  }

  /// Runs the proof of `roots` under hypothesis size bound `cap`. Returns true
  /// when on_success asked to stop.
  bool run(const std::vector<CellIdx>& roots, std::uint32_t cap, std::uint32_t start_depth = 0) {
    cap_ = cap;
    roots_ = roots;
    arena_.clear();
    if (roots_.empty()) return on_success();
    arena_.push_back({roots_[0], kNil});
    return solve(0, start_depth, 0);
  }

  /// Depth reached by the derivation that triggered the current on_success.
  std::uint32_t final_depth() const { return final_depth_; }

 private:
  void mark_learnable(FunctorId f) {
    if (learnable_.size() <= f) learnable_.resize(f + 1, false);
    learnable_[f] = true;
  }
  bool learnable(FunctorId f) const { return f < learnable_.size() && learnable_[f]; }

  const BuiltinFn* builtin(FunctorId f) {
    if (builtin_cache_.size() <= f) {
      builtin_cache_.resize(ft().size(), nullptr);
      builtin_known_.resize(ft().size(), false);
    }
    if (!builtin_known_[f]) {
      builtin_cache_[f] = builtins_.find(ft().symbol(f));
      builtin_known_[f] = true;
    }
    return builtin_cache_[f];
  }

  void tick() {
    ++nodes;
    if (deadline && (nodes & 0x3ff) == 0 && Clock::now() > *deadline) throw LearnTimeout{};
  }

  bool solve(std::uint32_t goals, std::uint32_t depth, std::uint32_t ex) {
    if (goals == kNil) {
      if (ex + 1 < roots_.size()) {
        auto mark = arena_.size();
        arena_.push_back({roots_[ex + 1], kNil});
        bool r = solve(static_cast<std::uint32_t>(arena_.size() - 1), 0, ex + 1);
        arena_.resize(mark);
        return r;
      }
      final_depth_ = depth;
      return on_success();
    }
    if (depth >= spec_.options.depth_limit) return false;
    const GoalNode node = arena_[goals];
    CellIdx atom = heap_.deref(node.atom);
    if (heap_[atom].tag != Tag::Str) throw BuiltinError("goal is not callable");
    FunctorId pred = heap_[atom].fn;

    if (const BuiltinFn* fn = builtin(pred)) {
      tick();
      if (call_builtin(heap_, ft(), atom, *fn, [&] { return solve(node.next, depth + 1, ex); }))
        return true;
    }
    for (std::uint32_t ci : db_.clauses_for(pred))
      if (resolve(db_.clauses[ci], atom, node.next, depth, ex)) return true;
    if (!learnable(pred)) return false;
    for (std::size_t i = 0; i < hyp_code_.size(); ++i)
      if (hyp_code_[i]->pred == pred && resolve(*hyp_code_[i], atom, node.next, depth, ex))
        return true;
    std::uint32_t freed = pending(pred) ? 1 : 0;
    if (hyp_.size() + 1 + pending_ - freed > cap_) return false;
    for (const auto& m : spec_.metarules)
      if (try_metarule(m, atom, node.next, depth, ex)) return true;
    return false;
  }

  bool resolve(const ClauseCode& c, CellIdx atom, std::uint32_t next, std::uint32_t depth,
               std::uint32_t ex) {
    if (!first_arg_compatible(heap_, atom, c)) return false;
    tick();
    auto m = heap_.mark();
    auto arena_mark = arena_.size();
    CellIdx vb = heap_.new_vars(c.nvars);
    const TNode* p = c.head.data();
    const CellIdx first = static_cast<CellIdx>(heap_[atom].val);
    const std::uint32_t ar = heap_[atom].ar;
    bool ok = true;
    for (std::uint32_t k = 0; ok && k < ar; ++k) ok = heap_.unify_code(p, first + k, vb, ft());
    bool stop = false;
    if (ok) {
      for (auto it = c.body.rbegin(); it != c.body.rend(); ++it) {
        CellIdx b = heap_.build_atom(*it, vb, ft());
        arena_.push_back({b, next});
        next = static_cast<std::uint32_t>(arena_.size() - 1);
      }
      stop = solve(next, depth + 1, ex);
    }
    heap_.undo(m);
    arena_.resize(arena_mark);
    return stop;
  }

  // ---- metarule instantiation ----

  std::optional<MetaValue> value_of_cell(CellIdx c, const MetaVarDecl& d) {
    const Cell& cell = heap_[c];
    if (d.kind == MetaVarKind::Const) {
      if (cell.tag == Tag::Int) return MetaValue{cell.val};
      if (cell.tag == Tag::Str && cell.ar == 0) return MetaValue{ft().symbol(cell.fn)};
      return std::nullopt;
    }
    if (cell.tag == Tag::Str && cell.ar == d.arity) return MetaValue{ft().symbol(cell.fn)};
    return std::nullopt;
  }

  bool in_pool(const MetaValue& v, const MetaVarDecl& d) const {
    if (d.kind == MetaVarKind::Const)
      return std::find(pools_.consts.begin(), pools_.consts.end(), v) != pools_.consts.end();
    const auto& s = std::get<Symbol>(v);
    return std::find(pools_.funcs.begin(), pools_.funcs.end(), s) != pools_.funcs.end();
  }

  // Read-only match of a head template against the goal: fixes func/const
  // metavariables wherever the goal already has structure.
  bool prematch(const Metarule& m, const TemplateTerm& t, CellIdx c, Slots& slots) {
    c = heap_.deref(c);
    if (heap_.unbound(c)) return true;
    const Cell cell = heap_[c];
    switch (t.kind) {
      case TemplateTerm::Kind::Var: return true;
      case TemplateTerm::Kind::Int: return cell.tag == Tag::Int && cell.val == t.leaf.int_value();
      case TemplateTerm::Kind::Compound: {
        if (cell.tag != Tag::Str) return false;
        auto fid = ft().find(t.functor);
        if (!fid || *fid != cell.fn) return false;
        break;
      }
      case TemplateTerm::Kind::Apply: {
        const auto& d = m.decls[t.metavar];
        auto v = value_of_cell(c, d);
        if (!v || !in_pool(*v, d)) return false;
        auto& slot = slots[t.metavar];
        if (slot && *slot != *v) return false;
        slot = *v;
        if (cell.tag != Tag::Str) return true;
        break;
      }
    }
    for (std::uint32_t k = 0; k < cell.ar; ++k)
      if (!prematch(m, t.args[k], static_cast<CellIdx>(cell.val) + k, slots)) return false;
    return true;
  }

  bool try_metarule(const Metarule& m, CellIdx atom, std::uint32_t next, std::uint32_t depth,
                    std::uint32_t ex) {
    const Cell goal = heap_[atom];
    const Symbol& gsym = ft().symbol(goal.fn);
    if (m.head.arity() != gsym.arity) return false;
    Slots slots(m.decls.size());
    if (m.head.pred_metavar) {
      const auto& d = m.decls[*m.head.pred_metavar];
      if (d.arity != gsym.arity) return false;
      slots[*m.head.pred_metavar] = MetaValue{gsym};
    } else if (m.head.pred_name != gsym.name) {
      return false;
    }
    for (std::uint32_t k = 0; k < goal.ar; ++k)
      if (!prematch(m, m.head.args[k], static_cast<CellIdx>(goal.val) + k, slots)) return false;
    return enumerate(m, slots, 0, atom, next, depth, ex);
  }

  bool enumerate(const Metarule& m, Slots& slots, std::size_t i, CellIdx atom, std::uint32_t next,
                 std::uint32_t depth, std::uint32_t ex) {
    if (i == slots.size()) return commit(m, slots, atom, next, depth, ex);
    if (slots[i]) return enumerate(m, slots, i + 1, atom, next, depth, ex);
    const auto& d = m.decls[i];
    auto attempt = [&](MetaValue v) {
      slots[i] = std::move(v);
      bool r = enumerate(m, slots, i + 1, atom, next, depth, ex);
      slots[i].reset();
      return r;
    };
    switch (d.kind) {
      case MetaVarKind::Func:
        for (const auto& f : pools_.funcs)
          if (f.arity == d.arity && attempt(f)) return true;
        return false;
      case MetaVarKind::Const:
        for (const auto& c : pools_.consts)
          if (attempt(c)) return true;
        return false;
      case MetaVarKind::Pred: {
        for (const auto& p : pools_.body_preds)
          if (p.arity == d.arity && attempt(p)) return true;
        for (std::size_t k = 0; k < invented_.size(); ++k)
          if (invented_[k].arity == d.arity && attempt(invented_[k])) return true;
        // A fresh predicate needs a clause of its own later on.
        if (hyp_.size() + 1 + pending_ + 1 > cap_) return false;
        Symbol s{"pred_" + std::to_string(base_ + invented_.size() + 1), d.arity};
        FunctorId f = ft().intern(s);
        mark_learnable(f);
        invented_.push_back(s);
        defs_.push_back(0);
        ++pending_;
        bool r = attempt(s);
        --pending_;
        defs_.pop_back();
        invented_.pop_back();
        return r;
      }
    }
    return false;
  }

  std::optional<std::size_t> invented_index(const Symbol& s) const {
    for (std::size_t k = 0; k < invented_.size(); ++k)
      if (invented_[k] == s) return k;
    return std::nullopt;
  }

  bool pending(FunctorId f) {
    auto k = invented_index(ft().symbol(f));
    return k && defs_[*k] == 0;
  }

  bool commit(const Metarule& m, const Slots& slots, CellIdx atom, std::uint32_t next,
              std::uint32_t depth, std::uint32_t ex) {
    Metasub sub{m.name, {}};
    for (std::size_t i = 0; i < slots.size(); ++i) sub.bindings.push_back({m.decls[i].name, *slots[i]});
    if (std::find(hyp_.begin(), hyp_.end(), sub) != hyp_.end()) return false;
    const ClauseCode& code = code_for(m, sub);
    auto k = invented_index(ft().symbol(code.pred));
    bool defines_pending = k && defs_[*k] == 0;
    if (hyp_.size() + 1 + pending_ - (defines_pending ? 1 : 0) > cap_) return false;
    if (k) ++defs_[*k];
    if (defines_pending) --pending_;
    hyp_.push_back(std::move(sub));
    hyp_code_.push_back(&code);
    bool r = resolve(code, atom, next, depth, ex);
    hyp_code_.pop_back();
    hyp_.pop_back();
    if (defines_pending) ++pending_;
    if (k) --defs_[*k];
    return r;
  }

  const ClauseCode& code_for(const Metarule& m, const Metasub& sub) {
    auto it = codes_.find(sub);
    if (it != codes_.end()) return it->second;
    ClauseCompiler compiler(ft());
    auto code = compiler.compile(instantiate(m, sub), codes_.size());
    return codes_.emplace(sub, std::move(code)).first->second;
  }

  const ScenarioSpec& spec_;
  const BuiltinTable& builtins_;
  Pools pools_;
  std::uint32_t base_;
  ClauseDb db_;
  Heap heap_;
  std::vector<GoalNode> arena_;
  std::vector<CellIdx> roots_;
  std::uint32_t cap_ = 0;
  std::uint32_t final_depth_ = 0;

  std::vector<bool> learnable_;
  std::vector<const BuiltinFn*> builtin_cache_;
  std::vector<bool> builtin_known_;

  std::vector<Metasub> hyp_;
  std::vector<const ClauseCode*> hyp_code_;
  std::vector<Symbol> invented_;
  std::vector<std::uint32_t> defs_;  // clauses defining each invented predicate
  std::uint32_t pending_ = 0;         // invented predicates still without a clause
  std::map<Metasub, ClauseCode> codes_;
};

}  // namespace

bool check_example(const Hypothesis& h, const ScenarioSpec& spec, const BuiltinTable& builtins,
                   const Example& e) {
  Solver solver(spec.bk, builtins);
  solver.add_clauses(h.program());
  return verdict(solver.solve(e.goal, check_config(spec, std::nullopt)).outcome, e.tag,
                 spec.options.neg_depth_policy);
}

bool check_hypothesis(const Hypothesis& h, const ScenarioSpec& spec, const BuiltinTable& builtins) {
  return check_all(h, spec, builtins, std::nullopt);
}

LearnResult learn(const ScenarioSpec& spec, const BuiltinTable& builtins, const LearnConfig& cfg) {
  auto start = Clock::now();
  LearnResult result;
  Prover prover(spec, builtins, pools_of(spec));
  if (spec.options.timeout_seconds > 0)
    prover.deadline = start + std::chrono::duration_cast<Clock::duration>(
                                  std::chrono::duration<double>(spec.options.timeout_seconds));

  std::vector<CellIdx> roots;
  std::unordered_map<VarId, CellIdx> vars;
  for (const auto& e : spec.examples) {
    if (e.tag != ExampleTag::Pos) continue;
    vars.clear();
    roots.push_back(prover.heap().load(e.goal.as_term(), vars, prover.ft()));
  }

  std::set<std::vector<Metasub>> rejected;
  std::optional<Hypothesis> found;
  bool stopped = false;
  prover.on_success = [&] {
    ++result.stats.candidates;
    auto sorted = prover.hypothesis();
    std::sort(sorted.begin(), sorted.end());
    if (cfg.prune_duplicates && rejected.count(sorted)) return false;
    Hypothesis h = make_hypothesis(spec, sorted);
    bool passed = check_all(h, spec, builtins, prover.deadline);
    if (cfg.on_candidate && cfg.on_candidate(h, passed)) stopped = true;
    if (passed) {
      found = std::move(h);
      return true;
    }
    if (cfg.prune_duplicates) rejected.insert(std::move(sorted));
    return stopped;
  };

  std::uint32_t max_size = cfg.max_size.value_or(spec.options.max_clauses);
  try {
    for (std::uint32_t n = cfg.min_size; n <= max_size && !found && !stopped; ++n) {
      result.stats.sizes_tried.push_back(n);
      prover.run(roots, n);
    }
    result.status = found ? LearnStatus::Found : LearnStatus::NoHypothesis;
  } catch (const LearnTimeout&) {
    result.status = LearnStatus::Timeout;
  } catch (const SolveTimeout&) {
    result.status = LearnStatus::Timeout;
  }
  result.hypothesis = std::move(found);
  result.stats.nodes = prover.nodes;
  result.stats.millis =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return result;
}

namespace {

void add_unique(Program& p, const Clause& c) {
  for (const auto& d : p.clauses)
    if (alpha_equivalent(c, d)) return;
  p.add(c);
}

}  // namespace

SequenceResult learn_seq(const std::vector<std::pair<std::string, ScenarioSpec>>& tasks,
                         const BuiltinTable& builtins, const LearnConfig& cfg) {
  SequenceResult out;
  Program induced;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& [name, original] = tasks[i];
    ScenarioSpec spec = original;
    for (const auto& c : induced.clauses) add_unique(spec.bk, c);
    // Functors the earlier tasks gave meaning to are now background syntax.
    std::unordered_set<Symbol, SymbolHash> bk_functors;
    for (const auto& s : functors_of(spec.bk)) bk_functors.insert(s);
    std::vector<Symbol> pool;
    for (const auto& s : spec.func_pool)
      if (!bk_functors.count(s) || std::find(original.func_pool.begin(), original.func_pool.end(), s) !=
                                        original.func_pool.end())
        pool.push_back(s);
    spec.func_pool = std::move(pool);

    for (const auto& c : original.bk.clauses) add_unique(out.program, c);
    TaskResult tr{name, learn(spec, builtins, cfg)};
    bool ok = tr.result.status == LearnStatus::Found;
    if (ok)
      for (const auto& c : tr.result.hypothesis->clauses) {
        add_unique(induced, c);
        add_unique(out.program, c);
      }
    out.tasks.push_back(std::move(tr));
    if (!ok) {
      out.failed_task = i;
      break;
    }
  }
  return out;
}

std::vector<std::pair<Clause, Metasub>> instantiate_metarule(const Metarule& m, const Atom& goal,
                                                             const Pools& pools) {
  std::vector<std::pair<Clause, Metasub>> out;
  if (m.head.arity() != goal.args.size()) return out;
  std::vector<std::vector<MetaValue>> choices(m.decls.size());
  for (std::size_t i = 0; i < m.decls.size(); ++i) {
    const auto& d = m.decls[i];
    switch (d.kind) {
      case MetaVarKind::Func:
        for (const auto& f : pools.funcs)
          if (f.arity == d.arity) choices[i].emplace_back(f);
        break;
      case MetaVarKind::Const: choices[i] = pools.consts; break;
      case MetaVarKind::Pred: {
        bool in_head = m.head.pred_metavar && *m.head.pred_metavar == i;
        const auto& pool = in_head ? pools.head_preds : pools.body_preds;
        for (const auto& p : pool)
          if (p.arity == d.arity) choices[i].emplace_back(p);
        break;
      }
    }
  }
  if (m.head.pred_metavar) {
    auto& c = choices[*m.head.pred_metavar];
    MetaValue g{goal.pred};
    if (std::find(c.begin(), c.end(), g) == c.end()) return out;
    c = {g};
  } else if (Symbol{m.head.pred_name, m.head.arity()} != goal.pred) {
    return out;
  }
  std::vector<std::size_t> idx(m.decls.size(), 0);
  for (const auto& c : choices)
    if (c.empty() && !m.decls.empty()) return out;
  const Term goal_t = goal.as_term();
  while (true) {
    Metasub sub{m.name, {}};
    for (std::size_t i = 0; i < m.decls.size(); ++i)
      sub.bindings.push_back({m.decls[i].name, choices[i][idx[i]]});
    Clause c = instantiate(m, sub);
    if (unify(c.head.as_term(), goal_t)) out.emplace_back(std::move(c), std::move(sub));
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return out;
}

void meta_prove(const Atom& goal, const MetaState& start, const ScenarioSpec& spec,
                const BuiltinTable& builtins, std::uint32_t max_size,
                const std::function<bool(const MetaState&)>& emit) {
  Prover prover(spec, builtins, pools_of(spec));
  prover.assume(start.hypothesis);
  std::unordered_map<VarId, CellIdx> vars;
  Atom g = apply_subst(start.subst, goal);
  CellIdx root = prover.heap().load(g.as_term(), vars, prover.ft());
  prover.on_success = [&] {
    MetaState s;
    s.subst = start.subst;
    std::unordered_map<CellIdx, Term> names;
    for (const auto& [id, cell] : vars) names.emplace(prover.heap().deref(cell), Term::var(id));
    for (const auto& [id, cell] : vars) {
      Term t = prover.heap().extract(cell, names, prover.ft());
      if (!(t.is_var() && t.var_id() == id)) s.subst.bind(id, std::move(t));
    }
    s.hypothesis = prover.hypothesis();
    s.depth = prover.final_depth();
    s.invented = start.invented + prover.invented();
    return emit(s);
  };
  prover.run({root}, max_size, start.depth);
}

}  // namespace milsem
