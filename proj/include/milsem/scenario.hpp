#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "milsem/term.hpp"

namespace milsem {

enum class MetaVarKind : std::uint8_t { Pred, Func, Const };

struct MetaVarDecl {
  MetaVarKind kind = MetaVarKind::Pred;
  std::string name;
  std::uint32_t arity = 0;  // always 0 for Const

  friend bool operator==(const MetaVarDecl&, const MetaVarDecl&) = default;
};

/// Argument template of a metarule. `Apply` is a compound whose functor is a
/// func (or const) metavariable, written `[H, A, B]` in metarule files.
struct TemplateTerm {
  enum class Kind : std::uint8_t { Var, Int, Compound, Apply };

  Kind kind = Kind::Var;
  Term leaf;                  // Var or Int
  Symbol functor;             // Compound
  std::size_t metavar = 0;    // Apply: index into Metarule::decls
  std::vector<TemplateTerm> args;

  static TemplateTerm from_term(const Term& t);  // plain term, no metavariables
};

struct TemplateAtom {
  std::optional<std::size_t> pred_metavar;  // index into decls when the predicate is a metavariable
  std::string pred_name;                    // fixed predicate name otherwise
  std::vector<TemplateTerm> args;

  std::uint32_t arity() const { return static_cast<std::uint32_t>(args.size()); }
};

/// Clause template whose predicate and function positions may be metavariables.
struct Metarule {
  std::string name;
  std::vector<MetaVarDecl> decls;
  TemplateAtom head;
  std::vector<TemplateAtom> body;
};

/// Value assigned to a metavariable: a symbol, or an integer for const slots.
using MetaValue = std::variant<Symbol, std::int64_t>;

struct MetaBinding {
  std::string metavar;
  MetaValue value;

  friend bool operator==(const MetaBinding&, const MetaBinding&) = default;
};

/// One instantiation of a metarule: every declared metavariable bound.
struct Metasub {
  std::string metarule;
  std::vector<MetaBinding> bindings;  // in declaration order

  friend bool operator==(const Metasub&, const Metasub&) = default;
  friend bool operator<(const Metasub& a, const Metasub& b);
};

std::string describe(const Metasub& m);

/// Clause obtained by substituting the metasub's bindings into the metarule.
/// First-order variables come out fresh.
Clause instantiate(const Metarule& rule, const Metasub& sub);

enum class ExampleTag : std::uint8_t { Pos, Neg, Nonterm };

struct Example {
  ExampleTag tag = ExampleTag::Pos;
  Atom goal;
};

enum class NegDepthPolicy : std::uint8_t { Reject, Accept };

struct ScenarioOptions {
  std::uint32_t depth_limit = 300;
  std::uint32_t max_clauses = 10;
  NegDepthPolicy neg_depth_policy = NegDepthPolicy::Reject;
  double timeout_seconds = 120.0;
};

struct ScenarioSpec {
  Program bk;
  std::vector<Metarule> metarules;
  std::vector<Symbol> head_preds;
  std::vector<Symbol> body_preds;
  std::vector<Symbol> func_pool;  // declared symbols followed by example functors not used in bk
  std::vector<Example> examples;
  ScenarioOptions options;

  const Metarule* find_metarule(const std::string& name) const;
};

/// Function symbols occurring in the argument terms of `p` (predicates excluded).
std::vector<Symbol> functors_of(const Program& p);

/// Appends to `spec.func_pool` every functor from example goals that is
/// neither already pooled nor used by the background knowledge. Constants that
/// only ever appear directly under a background functor (names) are skipped.
void augment_func_pool(ScenarioSpec& spec);

}  // namespace milsem
