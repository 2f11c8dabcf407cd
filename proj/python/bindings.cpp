#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "milsem/mil.hpp"
#include "milsem/object_lang.hpp"
#include "milsem/solver.hpp"
#include "milsem/textio.hpp"

namespace py = pybind11;
using namespace milsem;

namespace {

ScenarioSpec scenario_with(const std::string& text, std::optional<std::uint32_t> max_clauses,
                           std::optional<double> timeout) {
  ScenarioSpec s = parse_scenario(text);
  if (max_clauses) s.options.max_clauses = *max_clauses;
  if (timeout) s.options.timeout_seconds = *timeout;
  return s;
}

py::dict result_dict(const std::string& task, const LearnResult& r) {
  py::dict d;
  d["task"] = task;
  d["status"] = status_name(r.status);
  d["size"] = r.hypothesis ? r.hypothesis->size() : 0;
  d["nodes"] = r.stats.nodes;
  d["millis"] = r.stats.millis;
  d["sizes_tried"] = r.stats.sizes_tried;
  std::vector<std::string> clauses;
  if (r.hypothesis)
    for (const auto& c : r.hypothesis->clauses) clauses.push_back(print_clause(c));
  d["clauses"] = clauses;
  return d;
}

py::dict learn_text(const std::string& text, std::optional<std::uint32_t> max_clauses,
                    std::optional<double> timeout, bool prune, const std::string& task) {
  ScenarioSpec spec = scenario_with(text, max_clauses, timeout);
  LearnConfig cfg;
  cfg.prune_duplicates = prune;
  LearnResult r;
  {
    py::gil_scoped_release nogil;
    r = learn(spec, object_builtins(), cfg);
  }
  py::dict d = result_dict(task, r);
  Program full = spec.bk;
  if (r.hypothesis) full.append(r.hypothesis->program());
  d["program"] = print_program(full);
  return d;
}

py::dict chain_text(const std::vector<std::pair<std::string, std::string>>& named) {
  std::vector<std::pair<std::string, ScenarioSpec>> tasks;
  for (const auto& [name, text] : named) tasks.emplace_back(name, parse_scenario(text));
  SequenceResult r;
  {
    py::gil_scoped_release nogil;
    r = learn_seq(tasks, object_builtins());
  }
  py::list results;
  std::size_t induced = 0;
  for (const auto& t : r.tasks) {
    results.append(result_dict(t.name, t.result));
    if (t.result.hypothesis) induced += t.result.hypothesis->size();
  }
  py::dict d;
  d["tasks"] = results;
  d["induced"] = induced;
  d["failed_task"] = r.failed_task ? py::cast(*r.failed_task) : py::none();
  d["program"] = print_program(r.program);
  return d;
}

py::tuple evaluate(const std::string& program, const std::string& term, std::uint32_t depth) {
  Program p = load_program_text(program);
  Term v = Term::fresh_var("V");
  SolveConfig cfg;
  cfg.depth_limit = depth;
  SolveResult r = solve(p, object_builtins(), Atom("eval", {parse_term(term), v}), cfg);
  py::object value = py::none();
  if (is_proved(r.outcome)) value = py::str(print_term(apply_subst(std::get<Proved>(r.outcome).answer, v)));
  return py::make_tuple(outcome_name(r.outcome), value);
}

py::list query(const std::string& program, const std::string& goal, std::uint32_t depth) {
  Program p = load_program_text(program);
  Atom a = parse_atom(goal);
  SolveConfig cfg;
  cfg.depth_limit = depth;
  cfg.find_all = true;
  SolveResult r = solve(p, object_builtins(), a, cfg);
  py::list out;
  for (const auto& ans : r.answers) out.append(print_atom(apply_subst(ans, a)));
  return out;
}

py::tuple ref_eval(const std::string& term, const std::string& strategy, std::uint64_t fuel) {
  EvalResult r = reference_eval(parse_term(term), OracleConfig{parse_strategy(strategy), fuel});
  switch (r.kind) {
    case EvalResult::Value: return py::make_tuple("value", print_term(r.term));
    case EvalResult::Stuck: return py::make_tuple("stuck", print_term(r.term));
    case EvalResult::Bottom: break;
  }
  return py::make_tuple("bottom", py::none());
}

py::dict check(const std::string& program, const std::vector<std::string>& terms, const std::string& strategy,
               std::uint64_t fuel, std::uint32_t depth) {
  Program p = load_program_text(program);
  std::vector<Term> ts;
  for (const auto& t : terms) ts.push_back(parse_term(t));
  ConformanceReport rep;
  {
    py::gil_scoped_release nogil;
    rep = conformance_check(p, ts, OracleConfig{parse_strategy(strategy), fuel}, depth);
  }
  py::list violations;
  for (const auto& v : rep.violations) {
    py::dict e;
    e["condition"] = v.condition;
    e["term"] = print_term(v.term);
    e["detail"] = v.detail;
    violations.append(e);
  }
  py::dict d;
  d["checked"] = rep.checked;
  d["skipped"] = rep.skipped.size();
  d["violations"] = violations;
  return d;
}

}  // namespace

PYBIND11_MODULE(_milsem, m) {
  m.doc() = "Learning small-step semantics from evaluation examples";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<SemanticError>(m, "SemanticError", PyExc_ValueError);
  py::register_exception<BuiltinError>(m, "BuiltinError", PyExc_RuntimeError);

  m.def("parse_term", [](const std::string& s) { return print_term(parse_term(s)); },
        "Parse a term and return its canonical text.");
  m.def("parse_program", [](const std::string& s) { return print_program(load_program_text(s)); },
        "Parse a program (or the bk of a scenario) and return its canonical text.");
  m.def("scenario_names", &builtin_scenario_names);
  m.def("scenario_text", &builtin_scenario_text, py::arg("name"));
  m.def("learn", &learn_text, py::arg("scenario"), py::arg("max_clauses") = py::none(),
        py::arg("timeout") = py::none(), py::arg("prune") = true, py::arg("task") = "task",
        "Learn a hypothesis for scenario text. Returns the statistics plus the full program.");
  m.def("learn_chain", &chain_text, py::arg("tasks"),
        "Learn (name, scenario text) tasks in order, each extending the previous program.");
  m.def("evaluate", &evaluate, py::arg("program"), py::arg("term"), py::arg("depth") = 300,
        "Solve eval(term, V). Returns (outcome, value or None).");
  m.def("query", &query, py::arg("program"), py::arg("goal"), py::arg("depth") = 300,
        "Every answer to goal within the depth bound, as instantiated atoms.");
  m.def("reference_eval", &ref_eval, py::arg("term"), py::arg("strategy") = "eager", py::arg("fuel") = 10000,
        "Run the reference evaluator. Returns (kind, term or None).");
  m.def("substitute", [](const std::string& v, const std::string& x, const std::string& t) {
          return print_term(substitute(parse_term(v), x, parse_term(t)));
        },
        py::arg("value"), py::arg("name"), py::arg("body"));
  m.def("check", &check, py::arg("program"), py::arg("terms"), py::arg("strategy") = "eager",
        py::arg("fuel") = 10000, py::arg("depth") = 300,
        "Conformance of eval/2 under the program against the reference evaluator.");
}
