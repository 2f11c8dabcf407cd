#include "milsem/term.hpp"

#include <atomic>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace milsem {

struct Term::Node {
  Kind kind;
  VarId id = 0;
  std::int64_t value = 0;
  Symbol functor;
  std::vector<Term> args;
  std::string var_name;
  std::size_t hash = 0;
};

namespace {

std::atomic<VarId> g_next_var{1};

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

VarId next_var_id() { return g_next_var.fetch_add(1, std::memory_order_relaxed); }

Term::Term() : node_(Term::constant("[]").node_) {}

Term Term::var(VarId id, std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->id = id;
  n->var_name = name.empty() ? "_G" + std::to_string(id) : std::move(name);
  n->hash = mix(1, id);
  return Term(std::move(n));
}

Term Term::fresh_var(std::string name) { return var(next_var_id(), std::move(name)); }

Term Term::integer(std::int64_t value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Int;
  n->value = value;
  n->hash = mix(2, std::hash<std::int64_t>{}(value));
  return Term(std::move(n));
}

Term Term::compound(Symbol functor, std::vector<Term> args) {
  if (functor.name.empty()) throw std::invalid_argument("empty functor name");
  if (functor.arity != args.size())
    throw std::invalid_argument("arity mismatch for " + functor.str() + ": got " +
                                std::to_string(args.size()) + " arguments");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Compound;
  std::size_t h = mix(3, SymbolHash{}(functor));
  for (const auto& a : args) h = mix(h, a.hash());
  n->hash = h;
  n->functor = std::move(functor);
  n->args = std::move(args);
  return Term(std::move(n));
}

Term Term::compound(std::string name, std::vector<Term> args) {
  auto arity = static_cast<std::uint32_t>(args.size());
  return compound(Symbol{std::move(name), arity}, std::move(args));
}

Term Term::constant(std::string name) { return compound(Symbol{std::move(name), 0}, {}); }

Term::Kind Term::kind() const { return node_->kind; }

bool Term::is_constant() const { return is_compound() && node_->functor.arity == 0; }

bool Term::is_ground() const {
  switch (kind()) {
    case Kind::Var: return false;
    case Kind::Int: return true;
    case Kind::Compound:
      for (const auto& a : node_->args)
        if (!a.is_ground()) return false;
      return true;
  }
  return true;
}

VarId Term::var_id() const {
  if (!is_var()) throw std::logic_error("var_id on non-variable");
  return node_->id;
}

const std::string& Term::var_name() const {
  if (!is_var()) throw std::logic_error("var_name on non-variable");
  return node_->var_name;
}

std::int64_t Term::int_value() const {
  if (!is_int()) throw std::logic_error("int_value on non-integer");
  return node_->value;
}

const Symbol& Term::functor() const {
  if (!is_compound()) throw std::logic_error("functor on non-compound");
  return node_->functor;
}

std::span<const Term> Term::args() const {
  if (!is_compound()) return {};
  return node_->args;
}

std::size_t Term::hash() const { return node_->hash; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Var: return a.node_->id == b.node_->id;
    case Term::Kind::Int: return a.node_->value == b.node_->value;
    case Term::Kind::Compound:
      return a.node_->functor == b.node_->functor && a.node_->args == b.node_->args;
  }
  return false;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (a.kind() != b.kind()) return a.kind() <=> b.kind();
  switch (a.kind()) {
    case Term::Kind::Var: return a.node_->id <=> b.node_->id;
    case Term::Kind::Int: return a.node_->value <=> b.node_->value;
    case Term::Kind::Compound: {
      if (auto c = a.node_->functor <=> b.node_->functor; c != 0) return c;
      for (std::size_t i = 0; i < a.node_->args.size(); ++i)
        if (auto c = a.node_->args[i] <=> b.node_->args[i]; c != 0) return c;
      return std::strong_ordering::equal;
    }
  }
  return std::strong_ordering::equal;
}

Atom::Atom(Symbol p, std::vector<Term> a) : pred(std::move(p)), args(std::move(a)) {
  if (pred.arity != args.size()) throw std::invalid_argument("arity mismatch for " + pred.str());
}

Atom::Atom(std::string name, std::vector<Term> a) : args(std::move(a)) {
  pred = Symbol{std::move(name), static_cast<std::uint32_t>(args.size())};
}

Term Atom::as_term() const { return Term::compound(pred, args); }

Atom Atom::from_term(const Term& t) {
  if (!t.is_compound()) throw std::invalid_argument("atom must be a compound or constant");
  return Atom(t.functor(), {t.args().begin(), t.args().end()});
}

void Program::append(const Program& other) {
  clauses.insert(clauses.end(), other.clauses.begin(), other.clauses.end());
}

bool Program::defines(const Symbol& pred) const {
  for (const auto& c : clauses)
    if (c.head.pred == pred) return true;
  return false;
}

std::vector<Symbol> Program::predicates() const {
  std::vector<Symbol> out;
  std::unordered_set<Symbol, SymbolHash> seen;
  auto note = [&](const Symbol& s) {
    if (seen.insert(s).second) out.push_back(s);
  };
  for (const auto& c : clauses) {
    note(c.head.pred);
    for (const auto& b : c.body) note(b.pred);
  }
  return out;
}

const Term* Substitution::lookup(VarId v) const {
  auto it = bindings_.find(v);
  return it == bindings_.end() ? nullptr : &it->second;
}

Term Substitution::walk(const Term& t) const {
  Term cur = t;
  // bounded by the number of bindings, so cyclic var-var chains terminate
  for (std::size_t steps = 0; cur.is_var() && steps <= bindings_.size(); ++steps) {
    const Term* next = lookup(cur.var_id());
    if (!next) break;
    cur = *next;
  }
  return cur;
}

namespace {

bool occurs(VarId v, const Term& t, const Substitution& s) {
  Term w = s.walk(t);
  if (w.is_var()) return w.var_id() == v;
  for (const auto& a : w.args())
    if (occurs(v, a, s)) return true;
  return false;
}

}  // namespace

std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& s,
                                  OccursCheck mode) {
  Substitution out = s;
  std::vector<std::pair<Term, Term>> stack{{a, b}};
  while (!stack.empty()) {
    auto [x, y] = std::move(stack.back());
    stack.pop_back();
    x = out.walk(x);
    y = out.walk(y);
    if (x.is_var() && y.is_var() && x.var_id() == y.var_id()) continue;
    if (x.is_var() || y.is_var()) {
      const Term& v = x.is_var() ? x : y;
      const Term& t = x.is_var() ? y : x;
      if (mode == OccursCheck::On && occurs(v.var_id(), t, out)) return std::nullopt;
      out.bind(v.var_id(), t);
      continue;
    }
    if (x.is_int() || y.is_int()) {
      if (!(x.is_int() && y.is_int() && x.int_value() == y.int_value())) return std::nullopt;
      continue;
    }
    if (x.functor() != y.functor()) return std::nullopt;
    for (std::size_t i = 0; i < x.arity(); ++i) stack.emplace_back(x.arg(i), y.arg(i));
  }
  return out;
}

namespace {

Term apply_rec(const Substitution& s, const Term& t, std::vector<VarId>& expanding) {
  switch (t.kind()) {
    case Term::Kind::Int: return t;
    case Term::Kind::Var: {
      const Term* b = s.lookup(t.var_id());
      if (!b) return t;
      for (VarId v : expanding)
        if (v == t.var_id()) return t;
      expanding.push_back(t.var_id());
      Term r = apply_rec(s, *b, expanding);
      expanding.pop_back();
      return r;
    }
    case Term::Kind::Compound: {
      if (t.arity() == 0) return t;
      std::vector<Term> args;
      args.reserve(t.arity());
      bool changed = false;
      for (const auto& a : t.args()) {
        args.push_back(apply_rec(s, a, expanding));
        changed = changed || !(args.back() == a);
      }
      return changed ? Term::compound(t.functor(), std::move(args)) : t;
    }
  }
  return t;
}

}  // namespace

Term apply_subst(const Substitution& s, const Term& t) {
  if (s.empty()) return t;
  std::vector<VarId> expanding;
  return apply_rec(s, t, expanding);
}

Atom apply_subst(const Substitution& s, const Atom& a) {
  std::vector<Term> args;
  args.reserve(a.args.size());
  for (const auto& t : a.args) args.push_back(apply_subst(s, t));
  return Atom(a.pred, std::move(args));
}

Term VarCounter::fresh() {
  auto n = next_++;
  return Term::var(next_var_id(), "_v" + std::to_string(n));
}

namespace {

Term rename_term(const Term& t, std::unordered_map<VarId, Term>& map, VarCounter& counter) {
  switch (t.kind()) {
    case Term::Kind::Int: return t;
    case Term::Kind::Var: {
      auto it = map.find(t.var_id());
      if (it != map.end()) return it->second;
      Term f = counter.fresh();
      map.emplace(t.var_id(), f);
      return f;
    }
    case Term::Kind::Compound: {
      if (t.is_ground()) return t;
      std::vector<Term> args;
      args.reserve(t.arity());
      for (const auto& a : t.args()) args.push_back(rename_term(a, map, counter));
      return Term::compound(t.functor(), std::move(args));
    }
  }
  return t;
}

Atom rename_atom(const Atom& a, std::unordered_map<VarId, Term>& map, VarCounter& counter) {
  std::vector<Term> args;
  args.reserve(a.args.size());
  for (const auto& t : a.args) args.push_back(rename_term(t, map, counter));
  return Atom(a.pred, std::move(args));
}

bool alpha_rec(const Term& a, const Term& b, std::unordered_map<VarId, VarId>& fwd,
               std::unordered_map<VarId, VarId>& bwd) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Int: return a.int_value() == b.int_value();
    case Term::Kind::Var: {
      auto [fi, fnew] = fwd.emplace(a.var_id(), b.var_id());
      auto [bi, bnew] = bwd.emplace(b.var_id(), a.var_id());
      return fi->second == b.var_id() && bi->second == a.var_id();
    }
    case Term::Kind::Compound:
      if (a.functor() != b.functor()) return false;
      for (std::size_t i = 0; i < a.arity(); ++i)
        if (!alpha_rec(a.arg(i), b.arg(i), fwd, bwd)) return false;
      return true;
  }
  return false;
}

void collect_vars(const Term& t, std::vector<Term>& out, std::unordered_set<VarId>& seen) {
  if (t.is_var()) {
    if (seen.insert(t.var_id()).second) out.push_back(t);
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out, seen);
}

}  // namespace

Clause rename_apart(const Clause& c, VarCounter& counter) {
  std::unordered_map<VarId, Term> map;
  Clause out;
  out.head = rename_atom(c.head, map, counter);
  out.body.reserve(c.body.size());
  for (const auto& b : c.body) out.body.push_back(rename_atom(b, map, counter));
  return out;
}

bool alpha_equivalent(const Term& a, const Term& b) {
  std::unordered_map<VarId, VarId> fwd, bwd;
  return alpha_rec(a, b, fwd, bwd);
}

bool alpha_equivalent(const Clause& a, const Clause& b) {
  if (a.body.size() != b.body.size()) return false;
  std::unordered_map<VarId, VarId> fwd, bwd;
  if (!alpha_rec(a.head.as_term(), b.head.as_term(), fwd, bwd)) return false;
  for (std::size_t i = 0; i < a.body.size(); ++i)
    if (!alpha_rec(a.body[i].as_term(), b.body[i].as_term(), fwd, bwd)) return false;
  return true;
}

std::vector<Term> variables_of(const Term& t) {
  std::vector<Term> out;
  std::unordered_set<VarId> seen;
  collect_vars(t, out, seen);
  return out;
}

std::vector<Term> variables_of(const Clause& c) {
  std::vector<Term> out;
  std::unordered_set<VarId> seen;
  for (const auto& a : c.head.args) collect_vars(a, out, seen);
  for (const auto& b : c.body)
    for (const auto& a : b.args) collect_vars(a, out, seen);
  return out;
}

}  // namespace milsem
