#include "machine.hpp"

#include <algorithm>

namespace milsem::detail {

FunctorId FunctorTable::intern(const Symbol& s) {
  auto [it, added] = ids_.try_emplace(s, static_cast<FunctorId>(symbols_.size()));
  if (added) symbols_.push_back(s);
  return it->second;
}

std::optional<FunctorId> FunctorTable::find(const Symbol& s) const {
  auto it = ids_.find(s);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

void ClauseCompiler::term(const Term& t, std::vector<TNode>& out) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto [it, added] =
          slots_.try_emplace(t.var_id(), static_cast<std::uint32_t>(slots_.size()));
      out.push_back({TNode::Var, it->second, 0});
      return;
    }
    case Term::Kind::Int: out.push_back({TNode::Int, 0, t.int_value()}); return;
    case Term::Kind::Compound:
      out.push_back({TNode::Str, ft_.intern(t.functor()), 0});
      for (const auto& a : t.args()) term(a, out);
      return;
  }
}

ClauseCode ClauseCompiler::compile(const Clause& c, std::size_t id) {
  slots_.clear();
  ClauseCode code;
  code.id = id;
  code.pred = ft_.intern(c.head.pred);
  for (const auto& a : c.head.args) term(a, code.head);
  for (const auto& b : c.body) {
    std::vector<TNode> atom;
    term(b.as_term(), atom);
    code.body.push_back(std::move(atom));
  }
  code.nvars = static_cast<std::uint32_t>(slots_.size());
  if (!c.head.args.empty()) {
    const Term& first = c.head.args[0];
    if (first.is_compound()) code.key = {FirstArgKey::Str, ft_.intern(first.functor())};
    else if (first.is_int()) code.key = {FirstArgKey::Int, first.int_value()};
  }
  return code;
}

void ClauseDb::add(const Clause& c) {
  ClauseCompiler compiler(functors);
  clauses.push_back(compiler.compile(c, clauses.size()));
  const auto& code = clauses.back();
  if (by_pred.size() <= code.pred) by_pred.resize(functors.size());
  by_pred[code.pred].push_back(static_cast<std::uint32_t>(clauses.size() - 1));
}

bool Heap::occurs(CellIdx var, CellIdx t) const {
  std::vector<CellIdx> todo{t};
  while (!todo.empty()) {
    CellIdx c = deref(todo.back());
    todo.pop_back();
    if (c == var) return true;
    const Cell& cell = cells_[c];
    if (cell.tag == Tag::Str)
      for (std::uint32_t k = 0; k < cell.ar; ++k)
        todo.push_back(static_cast<CellIdx>(cell.val) + k);
  }
  return false;
}

bool Heap::unify(CellIdx a, CellIdx b, bool occurs_check) {
  std::vector<std::pair<CellIdx, CellIdx>> stack{{a, b}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    x = deref(x);
    y = deref(y);
    if (x == y) continue;
    bool ux = unbound(x), uy = unbound(y);
    if (ux && uy) {
      if (x > y) bind(x, y);
      else bind(y, x);
      continue;
    }
    if (ux || uy) {
      CellIdx v = ux ? x : y, t = ux ? y : x;
      if (occurs_check && occurs(v, t)) return false;
      bind(v, t);
      continue;
    }
    const Cell cx = cells_[x], cy = cells_[y];
    if (cx.tag != cy.tag) return false;
    if (cx.tag == Tag::Int) {
      if (cx.val != cy.val) return false;
      continue;
    }
    if (cx.fn != cy.fn) return false;
    if (cx.val == cy.val) continue;
    for (std::uint32_t k = cx.ar; k-- > 0;)
      stack.emplace_back(static_cast<CellIdx>(cx.val) + k, static_cast<CellIdx>(cy.val) + k);
  }
  return true;
}

void Heap::build(const TNode*& p, CellIdx slot, CellIdx var_base, const FunctorTable& ft) {
  const TNode n = *p++;
  switch (n.kind) {
    case TNode::Var: cells_[slot] = {Tag::Ref, 0, 0, var_base + n.a}; return;
    case TNode::Int: cells_[slot] = {Tag::Int, 0, 0, n.v}; return;
    case TNode::Str: {
      auto ar = ft.arity(n.a);
      CellIdx first = ar ? alloc(ar) : 0;
      cells_[slot] = {Tag::Str, static_cast<std::uint16_t>(ar), n.a, first};
      for (std::uint32_t k = 0; k < ar; ++k) build(p, first + k, var_base, ft);
      return;
    }
  }
}

CellIdx Heap::build_atom(const std::vector<TNode>& code, CellIdx var_base,
                         const FunctorTable& ft) {
  CellIdx s = alloc(1);
  const TNode* p = code.data();
  build(p, s, var_base, ft);
  return s;
}

bool Heap::unify_code(const TNode*& p, CellIdx t, CellIdx var_base, const FunctorTable& ft) {
  const TNode n = *p;
  switch (n.kind) {
    case TNode::Var: ++p; return unify(var_base + n.a, t);
    case TNode::Int: {
      ++p;
      t = deref(t);
      if (unbound(t)) {
        bind(t, new_int(n.v));
        return true;
      }
      return cells_[t].tag == Tag::Int && cells_[t].val == n.v;
    }
    case TNode::Str: {
      t = deref(t);
      if (unbound(t)) {
        CellIdx s = alloc(1);
        build(p, s, var_base, ft);
        bind(t, s);
        return true;
      }
      const Cell c = cells_[t];
      if (c.tag != Tag::Str || c.fn != n.a) return false;
      ++p;
      for (std::uint32_t k = 0; k < c.ar; ++k)
        if (!unify_code(p, static_cast<CellIdx>(c.val) + k, var_base, ft)) return false;
      return true;
    }
  }
  return false;
}

void Heap::load_into(const Term& t, CellIdx slot, std::unordered_map<VarId, CellIdx>& vars,
                     FunctorTable& ft) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto [it, added] = vars.try_emplace(t.var_id(), slot);
      cells_[slot] = {Tag::Ref, 0, 0, it->second};
      return;
    }
    case Term::Kind::Int: cells_[slot] = {Tag::Int, 0, 0, t.int_value()}; return;
    case Term::Kind::Compound: {
      auto fn = ft.intern(t.functor());
      auto ar = static_cast<std::uint32_t>(t.arity());
      CellIdx first = ar ? alloc(ar) : 0;
      cells_[slot] = {Tag::Str, static_cast<std::uint16_t>(ar), fn, first};
      for (std::uint32_t k = 0; k < ar; ++k) load_into(t.arg(k), first + k, vars, ft);
      return;
    }
  }
}

CellIdx Heap::load(const Term& t, std::unordered_map<VarId, CellIdx>& vars, FunctorTable& ft) {
  CellIdx s = alloc(1);
  load_into(t, s, vars, ft);
  return s;
}

Term Heap::extract(CellIdx i, std::unordered_map<CellIdx, Term>& vars,
                   const FunctorTable& ft) const {
  std::vector<CellIdx> path;
  return extract_rec(i, vars, ft, path);
}

// A cyclic binding (possible with the occurs check off) is cut where it
// re-enters itself; the re-entry point reads back as a variable.
Term Heap::extract_rec(CellIdx i, std::unordered_map<CellIdx, Term>& vars,
                       const FunctorTable& ft, std::vector<CellIdx>& path) const {
  i = deref(i);
  const Cell& c = cells_[i];
  auto as_var = [&] {
    auto [it, added] = vars.try_emplace(i, Term());
    if (added) it->second = Term::fresh_var();
    return it->second;
  };
  switch (c.tag) {
    case Tag::Ref: return as_var();
    case Tag::Int: return Term::integer(c.val);
    case Tag::Str: {
      if (std::find(path.begin(), path.end(), i) != path.end()) return as_var();
      path.push_back(i);
      std::vector<Term> args;
      args.reserve(c.ar);
      for (std::uint32_t k = 0; k < c.ar; ++k)
        args.push_back(extract_rec(static_cast<CellIdx>(c.val) + k, vars, ft, path));
      path.pop_back();
      return Term::compound(ft.symbol(c.fn), std::move(args));
    }
  }
  return Term();
}

void skip_code(const TNode*& p, const FunctorTable& ft) {
  const TNode n = *p++;
  if (n.kind == TNode::Str)
    for (std::uint32_t k = ft.arity(n.a); k > 0; --k) skip_code(p, ft);
}

}  // namespace milsem::detail
