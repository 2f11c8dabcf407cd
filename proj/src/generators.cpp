#include <algorithm>

#include "milsem/object_lang.hpp"

namespace milsem {

namespace {

enum class Ty { Any, Pair, List, Bool, Int, Fun, Var };

Term c(std::string name, std::vector<Term> args = {}) {
  return Term::compound(std::move(name), std::move(args));
}

class Gen {
 public:
  Gen(std::mt19937_64& rng, const TermGenOptions& opts) : rng_(rng), opts_(opts) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool coin() { return pick(2) == 0; }
  bool on(unsigned k) const { return (opts_.constructs & k) != 0; }

  Term name() { return Term::constant(opts_.names[pick(static_cast<int>(opts_.names.size()))]); }

  std::vector<Ty> types() const {
    std::vector<Ty> out{Ty::Var, Ty::Fun};
    if (on(kPairs)) out.push_back(Ty::Pair);
    if (on(kLists)) out.push_back(Ty::List);
    if (on(kConditionals)) out.push_back(Ty::Bool);
    if (on(kArith)) out.push_back(Ty::Int);
    return out;
  }

  Ty any() {
    auto ts = types();
    return ts[pick(static_cast<int>(ts.size()))];
  }

  Term value(Ty ty, int depth) {
    if (ty == Ty::Any) ty = any();
    switch (ty) {
      case Ty::Var: return c("var", {name()});
      case Ty::Fun: {
        Term x = name();
        Term body = depth > 0 && coin() ? value(Ty::Any, depth - 1) : c("var", {coin() ? x : name()});
        return c("lam", {x, body});
      }
      case Ty::Pair: return c("pair", {value(Ty::Any, depth - 1), value(Ty::Any, depth - 1)});
      case Ty::List:
        if (depth <= 0 || coin()) return c("nil");
        return c("cons", {value(Ty::Any, depth - 1), value(Ty::List, depth - 1)});
      case Ty::Bool: return c(coin() ? "true" : "false");
      case Ty::Int: return c("lit", {Term::integer(pick(10))});
      case Ty::Any: break;
    }
    return c("var", {name()});
  }

  // Expressions biased toward producing a value of type `ty`.
  Term expr(Ty ty, int depth) {
    if (ty == Ty::Any) ty = any();
    if (depth <= 0) return value(ty, 0);
    std::vector<int> forms{0};  // 0: canonical value
    if (ty == Ty::Pair) forms.push_back(1);
    if (ty == Ty::List) forms.push_back(2);
    if (on(kPairs)) forms.push_back(3);
    if (on(kLists)) forms.push_back(4);
    if (on(kConditionals)) forms.push_back(5);
    if (on(kLambda)) forms.insert(forms.end(), {6, 6});
    if (on(kLambda) && on(kPairs)) forms.push_back(7);
    if (ty == Ty::Int && on(kArith)) forms.push_back(8);
    switch (forms[pick(static_cast<int>(forms.size()))]) {
      case 1: return c("pair", {expr(Ty::Any, depth - 1), expr(Ty::Any, depth - 1)});
      case 2:
        return c("cons", {expr(Ty::Any, depth - 1), coin() ? c("nil") : expr(Ty::List, depth - 1)});
      case 3: {
        bool first = coin();
        Term keep = expr(ty, depth - 1), other = expr(Ty::Any, depth - 1);
        return c(first ? "fst" : "snd", {first ? c("pair", {keep, other}) : c("pair", {other, keep})});
      }
      case 4:
        if (ty == Ty::List && coin()) return c("tail", {c("cons", {expr(Ty::Any, depth - 1), expr(ty, depth - 1)})});
        return c("head", {c("cons", {expr(ty, depth - 1), value(Ty::List, 1)})});
      case 5: {
        Term cond = on(kConditionals) ? expr(Ty::Bool, depth - 1) : c("true");
        return c("if", {cond, c("thenelse", {expr(ty, depth - 1), expr(ty, depth - 1)})});
      }
      case 6: {
        Term x = name();
        Ty arg_ty = any();
        Term body = coin() ? c("var", {x}) : expr(ty, depth - 1);
        return c("app", {c("lam", {x, body}), expr(body.name() == "var" ? ty : arg_ty, depth - 1)});
      }
      case 7: {
        Term x = name();
        return c("app", {c("lam", {x, c("pair", {c("var", {x}), expr(Ty::Any, depth - 1)})}),
                         expr(Ty::Any, depth - 1)});
      }
      case 8: return c("add", {expr(Ty::Int, depth - 1), expr(Ty::Int, depth - 1)});
    }
    return value(ty, depth - 1);
  }

  Term arbitrary(int depth) {
    std::vector<std::string> ctors{"var", "lam", "app"};
    if (on(kPairs)) ctors.insert(ctors.end(), {"pair", "fst", "snd"});
    if (on(kLists)) ctors.insert(ctors.end(), {"cons", "nil", "head", "tail"});
    if (on(kConditionals)) ctors.insert(ctors.end(), {"if", "thenelse", "true", "false"});
    if (on(kArith)) ctors.insert(ctors.end(), {"lit", "add"});
    if (depth <= 0) return coin() ? c("var", {name()}) : c("lam", {name(), c("var", {name()})});
    const std::string& k = ctors[pick(static_cast<int>(ctors.size()))];
    if (k == "var") return c("var", {name()});
    if (k == "lam") return c("lam", {name(), arbitrary(depth - 1)});
    if (k == "lit") return c("lit", {Term::integer(pick(10))});
    if (k == "nil" || k == "true" || k == "false") return c(k);
    if (k == "fst" || k == "snd" || k == "head" || k == "tail") return c(k, {arbitrary(depth - 1)});
    return c(k, {arbitrary(depth - 1), arbitrary(depth - 1)});
  }

 private:
  std::mt19937_64& rng_;
  const TermGenOptions& opts_;
};

}  // namespace

unsigned constructs_of(const Term& t) {
  if (!t.is_compound()) return 0;
  unsigned m = 0;
  const auto& n = t.name();
  if (n == "app") m |= kLambda;
  if (n == "pair" || n == "fst" || n == "snd") m |= kPairs;
  if (n == "cons" || n == "head" || n == "tail") m |= kLists;
  if (n == "if") m |= kConditionals;
  if (n == "add") m |= kArith;
  for (const auto& a : t.args()) m |= constructs_of(a);
  return m;
}

Term random_object_term(std::mt19937_64& rng, const TermGenOptions& opts) {
  return Gen(rng, opts).arbitrary(opts.max_depth);
}

Term random_value(std::mt19937_64& rng, const TermGenOptions& opts, int depth) {
  return Gen(rng, opts).value(Ty::Any, depth);
}

std::vector<Term> random_evaluating_terms(std::mt19937_64& rng, std::size_t count,
                                          const TermGenOptions& opts, unsigned required,
                                          const OracleConfig& cfg) {
  Gen gen(rng, opts);
  std::vector<Term> out;
  for (std::size_t attempts = 0; out.size() < count && attempts < count * 1000; ++attempts) {
    Term t = gen.expr(Ty::Any, 1 + gen.pick(opts.max_depth));
    if (required && (constructs_of(t) & required) == 0) continue;
    if (is_value(t) && gen.pick(4) != 0) continue;
    if (reference_eval(t, cfg).kind != EvalResult::Value) continue;
    if (std::find(out.begin(), out.end(), t) != out.end()) continue;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace milsem
