#include "milsem/textio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace milsem {

ParseError::ParseError(int line, int column, std::vector<std::string> expected,
                       const std::string& found)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "line " << line << ", column " << column << ": syntax error, expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) os << (i ? " or " : "") << expected[i];
        os << ", found " << found;
        return os.str();
      }()),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

namespace {

const std::set<std::string, std::less<>> kSections = {
    "bk", "metarules", "head_preds", "body_preds", "func_pool", "examples", "options"};

enum class Tok {
  Name, Var, Int, LParen, RParen, LBracket, RBracket, Comma, Bar, End, Neck, Slash, Section, Eof
};

struct Token {
  Tok kind;
  std::string text;
  std::int64_t value = 0;
  int line = 1;
  int col = 1;
};

std::string describe_token(const Token& t) {
  switch (t.kind) {
    case Tok::Eof: return "end of input";
    case Tok::Section: return "section header '%% " + t.text + "'";
    default: return "'" + t.text + "'";
  }
}

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  Lexer(std::string_view src, bool sections) : src_(src), sections_(sections) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_layout(out);
      Token t{Tok::Eof, "", 0, line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::islower(static_cast<unsigned char>(c))) {
        t.kind = Tok::Name;
        t.text = take_ident();
      } else if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Var;
        t.text = take_ident();
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && pos_ + 1 < src_.size() &&
                  std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        std::size_t start = pos_;
        advance();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        t.kind = Tok::Int;
        t.text = std::string(src_.substr(start, pos_ - start));
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
        if (ec != std::errc()) throw ParseError(t.line, t.col, {"integer in range"}, t.text);
      } else if (c == ':' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
        advance();
        advance();
        t.kind = Tok::Neck;
        t.text = ":-";
      } else {
        switch (c) {
          case '(': t.kind = Tok::LParen; break;
          case ')': t.kind = Tok::RParen; break;
          case '[': t.kind = Tok::LBracket; break;
          case ']': t.kind = Tok::RBracket; break;
          case ',': t.kind = Tok::Comma; break;
          case '|': t.kind = Tok::Bar; break;
          case '.': t.kind = Tok::End; break;
          case '/': t.kind = Tok::Slash; break;
          default:
            throw ParseError(line_, col_, {"term"}, std::string("character '") + c + "'");
        }
        t.text = std::string(1, c);
        advance();
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string take_ident() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
    return std::string(src_.substr(start, pos_ - start));
  }

  bool at_line_start() const {
    for (std::size_t i = pos_; i > 0; --i) {
      char c = src_[i - 1];
      if (c == '\n') return true;
      if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;
  }

  void skip_layout(std::vector<Token>& out) {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '%') {
        if (sections_ && at_line_start() && pos_ + 1 < src_.size() && src_[pos_ + 1] == '%') {
          if (auto name = section_name()) {
            Token t{Tok::Section, *name, 0, line_, col_};
            while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            out.push_back(std::move(t));
            continue;
          }
        }
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  // `%% word` on its own line is a section header; anything else is a comment.
  std::optional<std::string> section_name() const {
    std::size_t end = src_.find('\n', pos_);
    std::string_view line = src_.substr(pos_ + 2, end == std::string_view::npos ? std::string_view::npos
                                                                                 : end - pos_ - 2);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return std::nullopt;
    auto last = line.find_last_not_of(" \t\r");
    std::string_view word = line.substr(first, last - first + 1);
    if (word.empty() || !std::all_of(word.begin(), word.end(), ident_char)) return std::nullopt;
    return std::string(word);
  }

  std::string_view src_;
  bool sections_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const Symbol kCons{".", 2};
const Symbol kNil{"[]", 0};
const Symbol kNeck{":-", 2};
const Symbol kSlash{"/", 2};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  const Token& next() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw ParseError(peek().line, peek().col, std::move(expected), describe_token(peek()));
  }

  const Token& expect(Tok k, const char* what) {
    if (!at(k)) fail({what});
    return next();
  }

  void new_scope() { scope_.clear(); }

  Term term() {
    Term t = primary();
    if (at(Tok::Slash)) {
      next();
      const Token& n = expect(Tok::Int, "integer arity");
      t = Term::compound(kSlash, {t, Term::integer(n.value)});
    }
    return t;
  }

  Term primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Var: {
        next();
        if (t.text == "_") return Term::fresh_var("_");
        auto it = scope_.find(t.text);
        if (it != scope_.end()) return it->second;
        Term v = Term::fresh_var(t.text);
        scope_.emplace(t.text, v);
        return v;
      }
      case Tok::Int: next(); return Term::integer(t.value);
      case Tok::Name: {
        std::string name = t.text;
        next();
        if (!at(Tok::LParen)) return Term::constant(name);
        next();
        std::vector<Term> args{term()};
        while (at(Tok::Comma)) {
          next();
          args.push_back(term());
        }
        expect(Tok::RParen, "',' or ')'");
        return Term::compound(std::move(name), std::move(args));
      }
      case Tok::LBracket: return list();
      case Tok::LParen: {
        next();
        Term lhs = term();
        if (at(Tok::Neck)) {
          next();
          Term rhs = term();
          lhs = Term::compound(kNeck, {lhs, rhs});
        }
        expect(Tok::RParen, "')'");
        return lhs;
      }
      default: fail({"term"});
    }
  }

  Term list() {
    expect(Tok::LBracket, "'['");
    if (at(Tok::RBracket)) {
      next();
      return Term::compound(kNil, {});
    }
    std::vector<Term> items{term()};
    while (at(Tok::Comma)) {
      next();
      items.push_back(term());
    }
    Term tail = Term::compound(kNil, {});
    if (at(Tok::Bar)) {
      next();
      tail = term();
    }
    if (!at(Tok::RBracket)) fail({"',' or '|' or ']'"});
    next();
    for (auto it = items.rbegin(); it != items.rend(); ++it)
      tail = Term::compound(kCons, {*it, tail});
    return tail;
  }

  Atom atom() {
    int line = peek().line, col = peek().col;
    Term t = term();
    if (!t.is_compound()) throw ParseError(line, col, {"atom"}, "'" + print_term(t) + "'");
    return Atom::from_term(t);
  }

  Clause clause() {
    new_scope();
    Clause c;
    c.head = atom();
    if (at(Tok::Neck)) {
      next();
      c.body.push_back(atom());
      while (at(Tok::Comma)) {
        next();
        c.body.push_back(atom());
      }
    }
    if (!at(Tok::End)) fail(c.body.empty() ? std::vector<std::string>{"':-'", "'.'"}
                                           : std::vector<std::string>{"','", "'.'"});
    next();
    return c;
  }

  std::size_t pos_ = 0;

 private:
  std::vector<Token> toks_;
  std::unordered_map<std::string, Term> scope_;
};

using NameMap = std::unordered_map<VarId, std::string>;

void print_rec(std::ostream& os, const Term& t, const NameMap* names) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      if (names) {
        auto it = names->find(t.var_id());
        if (it != names->end()) {
          os << it->second;
          return;
        }
      }
      os << t.var_name();
      return;
    }
    case Term::Kind::Int: os << t.int_value(); return;
    case Term::Kind::Compound: break;
  }
  const Symbol& f = t.functor();
  if (f == kNil) {
    os << "[]";
    return;
  }
  if (f == kCons) {
    os << '[';
    Term cur = t;
    bool first = true;
    while (cur.is_compound() && cur.functor() == kCons) {
      if (!first) os << ',';
      first = false;
      print_rec(os, cur.arg(0), names);
      cur = cur.arg(1);
    }
    if (!(cur.is_compound() && cur.functor() == kNil)) {
      os << '|';
      print_rec(os, cur, names);
    }
    os << ']';
    return;
  }
  if (f == kNeck) {
    os << '(';
    print_rec(os, t.arg(0), names);
    os << " :- ";
    print_rec(os, t.arg(1), names);
    os << ')';
    return;
  }
  if (f == kSlash) {
    print_rec(os, t.arg(0), names);
    os << '/';
    print_rec(os, t.arg(1), names);
    return;
  }
  os << f.name;
  if (f.arity == 0) return;
  os << '(';
  for (std::uint32_t i = 0; i < f.arity; ++i) {
    if (i) os << ',';
    print_rec(os, t.arg(i), names);
  }
  os << ')';
}

std::string letter_name(std::size_t i) {
  std::string s(1, static_cast<char>('A' + i % 26));
  if (i >= 26) s += std::to_string(i / 26);
  return s;
}

void count_vars(const Term& t, std::unordered_map<VarId, int>& counts) {
  if (t.is_var()) {
    ++counts[t.var_id()];
    return;
  }
  for (const auto& a : t.args()) count_vars(a, counts);
}

std::string print_atom_named(const Atom& a, const NameMap& names) {
  std::ostringstream os;
  print_rec(os, a.as_term(), &names);
  return os.str();
}

// ---- scenario conversion ----------------------------------------------

std::vector<Term> list_items(const Term& t, const char* what) {
  std::vector<Term> out;
  Term cur = t;
  while (cur.is_compound() && cur.functor() == kCons) {
    out.push_back(cur.arg(0));
    cur = cur.arg(1);
  }
  if (!(cur.is_compound() && cur.functor() == kNil))
    throw SemanticError(std::string(what) + " must be a proper list: " + print_term(t));
  return out;
}

bool is_list(const Term& t) {
  return t.is_compound() && (t.functor() == kCons || t.functor() == kNil);
}

class MetaruleBuilder {
 public:
  Metarule build(const Term& fact) {
    if (!(fact.is_compound() && fact.name() == "metarule" && fact.arity() == 3))
      throw SemanticError("expected metarule(Name, Decls, Rule), found " + print_term(fact));
    if (!fact.arg(0).is_constant())
      throw SemanticError("metarule name must be a constant: " + print_term(fact.arg(0)));
    rule_.name = fact.arg(0).name();
    for (const auto& d : list_items(fact.arg(1), "metarule declarations")) declare(d);

    const Term& body = fact.arg(2);
    Term head_t = body;
    std::vector<Term> body_items;
    if (body.is_compound() && body.functor() == kNeck) {
      head_t = body.arg(0);
      body_items = list_items(body.arg(1), "metarule body");
    }
    rule_.head = atom(head_t);
    for (const auto& b : body_items) rule_.body.push_back(atom(b));
    return std::move(rule_);
  }

 private:
  void declare(const Term& d) {
    if (!(d.is_compound() && d.arity() == 1))
      throw SemanticError("bad metavariable declaration: " + print_term(d));
    MetaVarDecl decl;
    const std::string& kind = d.name();
    Term target = d.arg(0);
    std::optional<std::uint32_t> arity;
    if (target.is_compound() && target.functor() == kSlash) {
      if (!target.arg(1).is_int() || target.arg(1).int_value() < 0)
        throw SemanticError("bad arity in declaration " + print_term(d));
      arity = static_cast<std::uint32_t>(target.arg(1).int_value());
      target = target.arg(0);
    }
    if (!target.is_var()) throw SemanticError("metavariable must be a variable: " + print_term(d));
    decl.name = target.var_name();
    if (kind == "pred") {
      decl.kind = MetaVarKind::Pred;
    } else if (kind == "func") {
      decl.kind = MetaVarKind::Func;
      if (!arity) throw SemanticError("func declaration needs an arity: " + print_term(d));
    } else if (kind == "const") {
      decl.kind = MetaVarKind::Const;
      if (arity && *arity != 0) throw SemanticError("const metavariable with nonzero arity");
      arity = 0;
    } else {
      throw SemanticError("unknown metavariable kind '" + kind + "'");
    }
    if (index_.count(decl.name)) throw SemanticError("metavariable " + decl.name + " declared twice");
    decl.arity = arity.value_or(0);
    if (arity) fixed_arity_.insert(decl.name);
    index_.emplace(decl.name, rule_.decls.size());
    rule_.decls.push_back(std::move(decl));
  }

  void check_arity(std::size_t idx, std::uint32_t used) {
    auto& decl = rule_.decls[idx];
    if (fixed_arity_.count(decl.name)) {
      if (decl.arity != used)
        throw SemanticError("arity mismatch for metavariable " + decl.name + " in metarule " +
                            rule_.name + ": declared " + std::to_string(decl.arity) + ", used with " +
                            std::to_string(used));
      return;
    }
    decl.arity = used;
    fixed_arity_.insert(decl.name);
  }

  std::optional<std::size_t> metavar(const Term& t) const {
    if (!t.is_var()) return std::nullopt;
    auto it = index_.find(t.var_name());
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  TemplateAtom atom(const Term& t) {
    if (!is_list(t)) throw SemanticError("metarule atoms are written as lists: " + print_term(t));
    auto items = list_items(t, "metarule atom");
    if (items.empty()) throw SemanticError("empty metarule atom");
    TemplateAtom a;
    for (std::size_t i = 1; i < items.size(); ++i) a.args.push_back(arg(items[i]));
    if (auto mv = metavar(items[0])) {
      if (rule_.decls[*mv].kind != MetaVarKind::Pred)
        throw SemanticError("metavariable " + rule_.decls[*mv].name + " used as a predicate");
      check_arity(*mv, a.arity());
      a.pred_metavar = *mv;
    } else if (items[0].is_constant()) {
      a.pred_name = items[0].name();
    } else {
      throw SemanticError("undeclared predicate metavariable in " + print_term(t));
    }
    return a;
  }

  TemplateTerm arg(const Term& t) {
    TemplateTerm out;
    if (auto mv = metavar(t)) {
      const auto& decl = rule_.decls[*mv];
      if (decl.kind != MetaVarKind::Const)
        throw SemanticError("metavariable " + decl.name + " used without arguments");
      out.kind = TemplateTerm::Kind::Apply;
      out.metavar = *mv;
      return out;
    }
    switch (t.kind()) {
      case Term::Kind::Var:
      case Term::Kind::Int:
        out.kind = t.is_var() ? TemplateTerm::Kind::Var : TemplateTerm::Kind::Int;
        out.leaf = t;
        return out;
      case Term::Kind::Compound: break;
    }
    if (t.functor() == kCons) {
      auto items = list_items(t, "function application");
      std::vector<TemplateTerm> args;
      for (std::size_t i = 1; i < items.size(); ++i) args.push_back(arg(items[i]));
      if (auto mv = metavar(items[0])) {
        const auto& decl = rule_.decls[*mv];
        if (decl.kind == MetaVarKind::Pred)
          throw SemanticError("predicate metavariable " + decl.name + " used as a function");
        if (decl.arity != args.size())
          throw SemanticError("arity mismatch for metavariable " + decl.name + " in metarule " +
                              rule_.name + ": declared " + std::to_string(decl.arity) +
                              ", used with " + std::to_string(args.size()));
        out.kind = TemplateTerm::Kind::Apply;
        out.metavar = *mv;
      } else if (items[0].is_constant()) {
        out.kind = TemplateTerm::Kind::Compound;
        out.functor = Symbol{items[0].name(), static_cast<std::uint32_t>(args.size())};
      } else {
        throw SemanticError("undeclared function metavariable in " + print_term(t));
      }
      out.args = std::move(args);
      return out;
    }
    out.kind = TemplateTerm::Kind::Compound;
    out.functor = t.functor();
    for (const auto& a : t.args()) out.args.push_back(arg(a));
    return out;
  }

  Metarule rule_;
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_set<std::string> fixed_arity_;
};

Symbol parse_indicator(const Clause& c, const std::string& section) {
  const Atom& a = c.head;
  if (!c.body.empty() || a.pred != kSlash || !a.args[0].is_constant() || !a.args[1].is_int() ||
      a.args[1].int_value() < 0)
    throw SemanticError("section '" + section + "' expects name/arity entries, found " +
                        print_clause(c));
  return Symbol{a.args[0].name(), static_cast<std::uint32_t>(a.args[1].int_value())};
}

std::uint32_t positive_option(const Atom& a) {
  if (a.args.size() != 1 || !a.args[0].is_int() || a.args[0].int_value() <= 0)
    throw SemanticError("option " + a.pred.name + " needs a positive integer");
  return static_cast<std::uint32_t>(a.args[0].int_value());
}

void apply_option(ScenarioOptions& o, const Clause& c) {
  if (!c.body.empty()) throw SemanticError("options are facts: " + print_clause(c));
  const Atom& a = c.head;
  const std::string& n = a.pred.name;
  if (n == "depth_limit") {
    o.depth_limit = positive_option(a);
  } else if (n == "max_clauses") {
    o.max_clauses = positive_option(a);
  } else if (n == "timeout") {
    o.timeout_seconds = positive_option(a);
  } else if (n == "neg_depth_policy" && a.args.size() == 1 && a.args[0].is_constant()) {
    const std::string& v = a.args[0].name();
    if (v == "reject") o.neg_depth_policy = NegDepthPolicy::Reject;
    else if (v == "accept") o.neg_depth_policy = NegDepthPolicy::Accept;
    else throw SemanticError("neg_depth_policy must be reject or accept");
  } else {
    throw SemanticError("unknown option " + print_clause(c));
  }
}

void push_unique(std::vector<Symbol>& v, const Symbol& s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

void validate(const ScenarioSpec& s) {
  std::unordered_set<Symbol, SymbolHash> declared;
  for (const auto& p : s.bk.predicates()) declared.insert(p);
  for (const auto& p : s.head_preds)
    if (!declared.count(p))
      throw SemanticError("head predicate " + p.str() + " is not declared in the bk section");
  for (const auto& p : s.body_preds)
    if (!declared.count(p))
      throw SemanticError("body predicate " + p.str() + " is not declared in the bk section");
  for (const auto& e : s.examples)
    if (!s.bk.defines(e.goal.pred))
      throw SemanticError("example predicate " + e.goal.pred.str() + " is not defined in bk");
  std::set<std::string> names;
  for (const auto& m : s.metarules)
    if (!names.insert(m.name).second) throw SemanticError("duplicate metarule " + m.name);
}

}  // namespace

Term parse_term(std::string_view text) {
  Parser p(Lexer(text, false).run());
  Term t = p.term();
  if (p.at(Tok::End)) p.next();
  if (!p.at(Tok::Eof)) p.fail({"end of input"});
  return t;
}

Atom parse_atom(std::string_view text) {
  Term t = parse_term(text);
  if (!t.is_compound()) throw ParseError(1, 1, {"atom"}, "'" + print_term(t) + "'");
  return Atom::from_term(t);
}

Clause parse_clause(std::string_view text) {
  Parser p(Lexer(text, false).run());
  Clause c = p.clause();
  if (!p.at(Tok::Eof)) p.fail({"end of input"});
  return c;
}

Program parse_program(std::string_view text) {
  Parser p(Lexer(text, false).run());
  Program prog;
  while (!p.at(Tok::Eof)) prog.add(p.clause());
  return prog;
}

std::vector<Term> parse_term_lines(std::string_view text) {
  std::vector<Term> out;
  std::size_t start = 0;
  int line_no = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    auto pct = line.find('%');
    if (pct != std::string_view::npos) line = line.substr(0, pct);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      try {
        out.push_back(parse_term(line));
      } catch (const ParseError& e) {
        throw ParseError(line_no, e.column(), e.expected(), "input (" + std::string(e.what()) + ")");
      }
    }
    start = end + 1;
  }
  return out;
}

Metarule parse_metarule(std::string_view text) {
  Clause c = parse_clause(text);
  if (!c.body.empty()) throw SemanticError("metarule entries are facts");
  return MetaruleBuilder().build(c.head.as_term());
}

bool looks_like_scenario(std::string_view text) {
  for (const auto& t : Lexer(text, true).run())
    if (t.kind == Tok::Section) return true;
  return false;
}

ScenarioSpec parse_scenario(std::string_view text) {
  Parser p(Lexer(text, true).run());
  ScenarioSpec spec;
  std::string section;
  while (!p.at(Tok::Eof)) {
    if (p.at(Tok::Section)) {
      section = p.next().text;
      if (!kSections.count(section)) throw SemanticError("unknown section '" + section + "'");
      continue;
    }
    if (section.empty()) p.fail({"section header"});
    Clause c = p.clause();
    if (section == "bk") {
      spec.bk.add(std::move(c));
    } else if (section == "metarules") {
      if (!c.body.empty()) throw SemanticError("metarule entries are facts");
      spec.metarules.push_back(MetaruleBuilder().build(c.head.as_term()));
    } else if (section == "head_preds") {
      push_unique(spec.head_preds, parse_indicator(c, section));
    } else if (section == "body_preds") {
      push_unique(spec.body_preds, parse_indicator(c, section));
    } else if (section == "func_pool") {
      push_unique(spec.func_pool, parse_indicator(c, section));
    } else if (section == "examples") {
      const Atom& a = c.head;
      if (!c.body.empty() || a.args.size() != 1 || !a.args[0].is_compound())
        throw SemanticError("examples are pos(Goal), neg(Goal) or nonterm(Goal): " + print_clause(c));
      Example e;
      if (a.pred.name == "pos") e.tag = ExampleTag::Pos;
      else if (a.pred.name == "neg") e.tag = ExampleTag::Neg;
      else if (a.pred.name == "nonterm") e.tag = ExampleTag::Nonterm;
      else throw SemanticError("unknown example tag '" + a.pred.name + "'");
      e.goal = Atom::from_term(a.args[0]);
      spec.examples.push_back(std::move(e));
    } else if (section == "options") {
      apply_option(spec.options, c);
    }
  }
  validate(spec);
  augment_func_pool(spec);
  return spec;
}

Program load_program_text(std::string_view text) {
  if (looks_like_scenario(text)) return parse_scenario(text).bk;
  return parse_program(text);
}

std::string print_term(const Term& t) {
  std::ostringstream os;
  print_rec(os, t, nullptr);
  return os.str();
}

std::string print_atom(const Atom& a) { return print_term(a.as_term()); }

std::string print_clause(const Clause& c) {
  std::unordered_map<VarId, int> counts;
  for (const auto& a : c.head.args) count_vars(a, counts);
  for (const auto& b : c.body)
    for (const auto& a : b.args) count_vars(a, counts);
  NameMap names;
  std::size_t next = 0;
  for (const auto& v : variables_of(c))
    names.emplace(v.var_id(), counts[v.var_id()] == 1 ? "_" : letter_name(next++));

  std::string head = print_atom_named(c.head, names);
  if (c.body.empty()) return head + ".";
  std::vector<std::string> body;
  std::size_t len = head.size() + 4;
  for (const auto& b : c.body) {
    body.push_back(print_atom_named(b, names));
    len += body.back().size() + 1;
  }
  std::string out = head + " :-";
  if (len <= 100) {
    out += ' ';
    for (std::size_t i = 0; i < body.size(); ++i) out += (i ? "," : "") + body[i];
  } else {
    for (std::size_t i = 0; i < body.size(); ++i) out += (i ? ",\n  " : "\n  ") + body[i];
  }
  return out + ".";
}

std::string print_program(const Program& p) {
  std::string out;
  for (const auto& c : p.clauses) out += print_clause(c) + "\n";
  return out;
}

namespace {

void print_template(std::ostream& os, const Metarule& m, const TemplateTerm& t) {
  switch (t.kind) {
    case TemplateTerm::Kind::Var:
    case TemplateTerm::Kind::Int: os << print_term(t.leaf); return;
    case TemplateTerm::Kind::Apply:
      os << '[' << m.decls[t.metavar].name;
      for (const auto& a : t.args) {
        os << ',';
        print_template(os, m, a);
      }
      os << ']';
      return;
    case TemplateTerm::Kind::Compound:
      os << t.functor.name;
      if (t.args.empty()) return;
      os << '(';
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) os << ',';
        print_template(os, m, t.args[i]);
      }
      os << ')';
      return;
  }
}

void print_template_atom(std::ostream& os, const Metarule& m, const TemplateAtom& a) {
  os << '[' << (a.pred_metavar ? m.decls[*a.pred_metavar].name : a.pred_name);
  for (const auto& t : a.args) {
    os << ',';
    print_template(os, m, t);
  }
  os << ']';
}

}  // namespace

std::string print_metarule(const Metarule& m) {
  std::ostringstream os;
  os << "metarule(" << m.name << ",[";
  for (std::size_t i = 0; i < m.decls.size(); ++i) {
    const auto& d = m.decls[i];
    if (i) os << ',';
    switch (d.kind) {
      case MetaVarKind::Pred: os << "pred(" << d.name << '/' << d.arity << ')'; break;
      case MetaVarKind::Func: os << "func(" << d.name << '/' << d.arity << ')'; break;
      case MetaVarKind::Const: os << "const(" << d.name << ')'; break;
    }
  }
  os << "],(";
  print_template_atom(os, m, m.head);
  os << " :- [";
  for (std::size_t i = 0; i < m.body.size(); ++i) {
    if (i) os << ',';
    print_template_atom(os, m, m.body[i]);
  }
  os << "])).";
  return os.str();
}

std::string print_scenario(const ScenarioSpec& s) {
  std::ostringstream os;
  os << "%% bk\n" << print_program(s.bk);
  os << "\n%% metarules\n";
  for (const auto& m : s.metarules) os << print_metarule(m) << '\n';
  auto symbols = [&](const char* name, const std::vector<Symbol>& v) {
    os << "\n%% " << name << '\n';
    for (const auto& sym : v) os << sym.name << '/' << sym.arity << ".\n";
  };
  symbols("head_preds", s.head_preds);
  symbols("body_preds", s.body_preds);
  symbols("func_pool", s.func_pool);
  os << "\n%% examples\n";
  for (const auto& e : s.examples) {
    const char* tag = e.tag == ExampleTag::Pos ? "pos" : e.tag == ExampleTag::Neg ? "neg" : "nonterm";
    std::string goal = print_clause(Clause{e.goal, {}});
    goal.pop_back();
    os << tag << '(' << goal << ").\n";
  }
  os << "\n%% options\n"
     << "depth_limit(" << s.options.depth_limit << ").\n"
     << "max_clauses(" << s.options.max_clauses << ").\n"
     << "neg_depth_policy("
     << (s.options.neg_depth_policy == NegDepthPolicy::Reject ? "reject" : "accept") << ").\n"
     << "timeout(" << static_cast<long long>(s.options.timeout_seconds) << ").\n";
  return os.str();
}

}  // namespace milsem
