#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace milsem {

/// A functor or predicate symbol. Two symbols are the same iff name and arity
/// agree, so `step/2` and `step/3` are unrelated.
struct Symbol {
  std::string name;
  std::uint32_t arity = 0;

  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;

  std::string str() const { return name + "/" + std::to_string(arity); }
};

struct SymbolHash {
  std::size_t operator()(const Symbol& s) const noexcept {
    return std::hash<std::string>{}(s.name) * 31 + s.arity;
  }
};

using VarId = std::uint64_t;

/// Allocates a process-wide unique variable identifier.
VarId next_var_id();

/// Immutable first-order term: a variable, an integer, or a compound whose
/// argument count always equals the functor arity. Copies share structure.
class Term {
 public:
  enum class Kind : std::uint8_t { Var, Int, Compound };

  Term();  // the constant `[]`; mostly useful as a placeholder

  static Term var(VarId id, std::string name = {});
  static Term fresh_var(std::string name = {});
  static Term integer(std::int64_t value);
  static Term compound(Symbol functor, std::vector<Term> args);
  static Term compound(std::string name, std::vector<Term> args);
  static Term constant(std::string name);

  Kind kind() const;
  bool is_var() const { return kind() == Kind::Var; }
  bool is_int() const { return kind() == Kind::Int; }
  bool is_compound() const { return kind() == Kind::Compound; }
  bool is_constant() const;  // nullary compound
  bool is_ground() const;

  VarId var_id() const;
  const std::string& var_name() const;
  std::int64_t int_value() const;
  const Symbol& functor() const;
  const std::string& name() const { return functor().name; }
  std::uint32_t arity() const { return functor().arity; }
  std::span<const Term> args() const;
  const Term& arg(std::size_t i) const { return args()[i]; }

  /// Structural equality; variables compare by identifier.
  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

  std::size_t hash() const;

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// A literal: predicate symbol applied to arguments.
struct Atom {
  Symbol pred;
  std::vector<Term> args;

  Atom() = default;
  Atom(Symbol p, std::vector<Term> a);
  Atom(std::string name, std::vector<Term> a);

  /// The atom viewed as a compound term with the predicate as functor.
  Term as_term() const;
  static Atom from_term(const Term& t);  // throws std::invalid_argument unless compound

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Definite clause. Facts have an empty body.
struct Clause {
  Atom head;
  std::vector<Atom> body;

  bool is_fact() const { return body.empty(); }
  friend bool operator==(const Clause&, const Clause&) = default;
};

/// Ordered clause list. Clause order is resolution order.
struct Program {
  std::vector<Clause> clauses;

  void add(Clause c) { clauses.push_back(std::move(c)); }
  void append(const Program& other);
  bool defines(const Symbol& pred) const;
  /// Predicates occurring anywhere (heads and bodies), in first-seen order.
  std::vector<Symbol> predicates() const;
  std::size_t size() const { return clauses.size(); }
};

/// Finite map from variables to terms. Bindings may chain (X -> Y, Y -> b);
/// `apply` resolves chains fully.
class Substitution {
 public:
  const Term* lookup(VarId v) const;
  void bind(VarId v, Term t) { bindings_.insert_or_assign(v, std::move(t)); }
  bool contains(VarId v) const { return bindings_.count(v) != 0; }
  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }
  const std::unordered_map<VarId, Term>& bindings() const { return bindings_; }

  /// Follows variable-to-variable and variable-to-term links at the top level.
  Term walk(const Term& t) const;

 private:
  std::unordered_map<VarId, Term> bindings_;
};

enum class OccursCheck : std::uint8_t { Off, On };

/// Most general unifier of `a` and `b` extending `s`, or nullopt.
std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& s = {},
                                  OccursCheck mode = OccursCheck::Off);

/// Replaces every bound variable by its fully resolved binding. Cyclic
/// bindings (possible with the occurs check off) are expanded once.
Term apply_subst(const Substitution& s, const Term& t);
Atom apply_subst(const Substitution& s, const Atom& a);

/// Monotone fresh-variable source; one per engine or caller, never global.
class VarCounter {
 public:
  Term fresh();
  std::uint64_t issued() const { return next_ - 1; }

 private:
  std::uint64_t next_ = 1;
};

/// Copies `c` with every variable replaced by a fresh one from `counter`.
Clause rename_apart(const Clause& c, VarCounter& counter);

/// Variable-renaming equivalence (bijective on variables).
bool alpha_equivalent(const Term& a, const Term& b);
bool alpha_equivalent(const Clause& a, const Clause& b);

/// Variables in order of first occurrence (depth-first, left to right).
std::vector<Term> variables_of(const Term& t);
std::vector<Term> variables_of(const Clause& c);

}  // namespace milsem
