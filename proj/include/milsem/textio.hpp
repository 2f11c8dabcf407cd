#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "milsem/scenario.hpp"
#include "milsem/term.hpp"

namespace milsem {

/// Lexical or grammatical error. Line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, std::vector<std::string> expected, const std::string& found);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
};

/// Well-formed text that violates a scenario rule (unknown section, arity
/// mismatch, undeclared predicate, ...).
class SemanticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Term parse_term(std::string_view text);
Atom parse_atom(std::string_view text);
Clause parse_clause(std::string_view text);
Program parse_program(std::string_view text);

/// One term per non-blank line; `%` comments allowed.
std::vector<Term> parse_term_lines(std::string_view text);

ScenarioSpec parse_scenario(std::string_view text);
Metarule parse_metarule(std::string_view text);

/// True when the text contains `%% section` headers.
bool looks_like_scenario(std::string_view text);

/// Clauses of a plain program file, or the bk section of a scenario file.
Program load_program_text(std::string_view text);

std::string print_term(const Term& t);
std::string print_atom(const Atom& a);
/// Variables are lettered A, B, ... by first occurrence; singletons print as `_`.
std::string print_clause(const Clause& c);
std::string print_program(const Program& p);
std::string print_metarule(const Metarule& m);
std::string print_scenario(const ScenarioSpec& s);

}  // namespace milsem
