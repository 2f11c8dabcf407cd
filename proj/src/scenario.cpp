#include "milsem/scenario.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "milsem/textio.hpp"

namespace milsem {

TemplateTerm TemplateTerm::from_term(const Term& t) {
  TemplateTerm out;
  switch (t.kind()) {
    case Term::Kind::Var: out.kind = Kind::Var; out.leaf = t; break;
    case Term::Kind::Int: out.kind = Kind::Int; out.leaf = t; break;
    case Term::Kind::Compound:
      out.kind = Kind::Compound;
      out.functor = t.functor();
      for (const auto& a : t.args()) out.args.push_back(from_term(a));
      break;
  }
  return out;
}

namespace {

int compare_value(const MetaValue& a, const MetaValue& b) {
  if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
  if (const auto* sa = std::get_if<Symbol>(&a)) {
    const auto& sb = std::get<Symbol>(b);
    if (*sa == sb) return 0;
    return *sa < sb ? -1 : 1;
  }
  auto ia = std::get<std::int64_t>(a), ib = std::get<std::int64_t>(b);
  return ia == ib ? 0 : (ia < ib ? -1 : 1);
}

std::string value_str(const MetaValue& v) {
  if (const auto* s = std::get_if<Symbol>(&v)) return s->str();
  return std::to_string(std::get<std::int64_t>(v));
}

struct Instantiator {
  const Metarule& rule;
  const Metasub& sub;
  std::unordered_map<VarId, Term> fresh;

  const MetaValue& value(std::size_t idx) const {
    const auto& name = rule.decls[idx].name;
    for (const auto& b : sub.bindings)
      if (b.metavar == name) return b.value;
    throw std::invalid_argument("metasub for " + rule.name + " leaves " + name + " unbound");
  }

  Term term(const TemplateTerm& t) {
    switch (t.kind) {
      case TemplateTerm::Kind::Int: return t.leaf;
      case TemplateTerm::Kind::Var: {
        auto [it, added] = fresh.try_emplace(t.leaf.var_id(), Term::fresh_var());
        return it->second;
      }
      case TemplateTerm::Kind::Compound: {
        std::vector<Term> args;
        for (const auto& a : t.args) args.push_back(term(a));
        return Term::compound(t.functor, std::move(args));
      }
      case TemplateTerm::Kind::Apply: {
        const MetaValue& v = value(t.metavar);
        if (const auto* i = std::get_if<std::int64_t>(&v)) {
          if (!t.args.empty()) throw std::invalid_argument("integer bound to a function metavariable");
          return Term::integer(*i);
        }
        const auto& sym = std::get<Symbol>(v);
        if (sym.arity != t.args.size())
          throw std::invalid_argument("arity mismatch binding " + rule.decls[t.metavar].name);
        std::vector<Term> args;
        for (const auto& a : t.args) args.push_back(term(a));
        return Term::compound(sym, std::move(args));
      }
    }
    return t.leaf;
  }

  Atom atom(const TemplateAtom& a) {
    std::vector<Term> args;
    for (const auto& t : a.args) args.push_back(term(t));
    if (a.pred_metavar) {
      const auto* sym = std::get_if<Symbol>(&value(*a.pred_metavar));
      if (!sym || sym->arity != a.arity())
        throw std::invalid_argument("bad predicate binding for " + rule.decls[*a.pred_metavar].name);
      return Atom(*sym, std::move(args));
    }
    return Atom(a.pred_name, std::move(args));
  }
};

void collect_functors(const Term& t, std::vector<Symbol>& out,
                      std::unordered_set<Symbol, SymbolHash>& seen) {
  if (!t.is_compound()) return;
  if (seen.insert(t.functor()).second) out.push_back(t.functor());
  for (const auto& a : t.args()) collect_functors(a, out, seen);
}

}  // namespace

bool operator<(const Metasub& a, const Metasub& b) {
  if (a.metarule != b.metarule) return a.metarule < b.metarule;
  std::size_t n = std::min(a.bindings.size(), b.bindings.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.bindings[i].metavar != b.bindings[i].metavar)
      return a.bindings[i].metavar < b.bindings[i].metavar;
    if (int c = compare_value(a.bindings[i].value, b.bindings[i].value); c != 0) return c < 0;
  }
  return a.bindings.size() < b.bindings.size();
}

std::string describe(const Metasub& m) {
  std::string out = m.metarule + "{";
  for (std::size_t i = 0; i < m.bindings.size(); ++i) {
    if (i) out += ", ";
    out += m.bindings[i].metavar + "=" + value_str(m.bindings[i].value);
  }
  return out + "}";
}

Clause instantiate(const Metarule& rule, const Metasub& sub) {
  Instantiator inst{rule, sub, {}};
  Clause c;
  c.head = inst.atom(rule.head);
  for (const auto& b : rule.body) c.body.push_back(inst.atom(b));
  return c;
}

const Metarule* ScenarioSpec::find_metarule(const std::string& name) const {
  for (const auto& m : metarules)
    if (m.name == name) return &m;
  return nullptr;
}

std::vector<Symbol> functors_of(const Program& p) {
  std::vector<Symbol> out;
  std::unordered_set<Symbol, SymbolHash> seen;
  for (const auto& c : p.clauses) {
    for (const auto& a : c.head.args) collect_functors(a, out, seen);
    for (const auto& b : c.body)
      for (const auto& a : b.args) collect_functors(a, out, seen);
  }
  return out;
}

namespace {

// Nullary symbols seen only as direct arguments of background functors
// (object-variable names such as the x in var(x)) are data, not syntax.
void collect_pool(const Term& t, bool under_bk, const std::unordered_set<Symbol, SymbolHash>& bk,
                  std::vector<Symbol>& out, std::unordered_set<Symbol, SymbolHash>& seen) {
  if (!t.is_compound()) return;
  bool nullary_name = t.arity() == 0 && under_bk;
  if (!nullary_name && seen.insert(t.functor()).second) out.push_back(t.functor());
  bool is_bk = bk.count(t.functor()) != 0;
  for (const auto& a : t.args()) collect_pool(a, is_bk, bk, out, seen);
}

}  // namespace

void augment_func_pool(ScenarioSpec& spec) {
  std::unordered_set<Symbol, SymbolHash> bk;
  for (const auto& s : functors_of(spec.bk)) bk.insert(s);
  std::unordered_set<Symbol, SymbolHash> excluded = bk;
  for (const auto& s : spec.func_pool) excluded.insert(s);
  std::vector<Symbol> found;
  std::unordered_set<Symbol, SymbolHash> seen;
  for (const auto& e : spec.examples)
    for (const auto& a : e.goal.args) collect_pool(a, false, bk, found, seen);
  for (const auto& s : found)
    if (excluded.insert(s).second) spec.func_pool.push_back(s);
}

}  // namespace milsem
