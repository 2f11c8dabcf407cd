// milsem: learn, run, chain and check over scenario and program files.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "milsem/mil.hpp"
#include "milsem/object_lang.hpp"
#include "milsem/solver.hpp"
#include "milsem/textio.hpp"

namespace {

using namespace milsem;
using nlohmann::json;

enum Exit { kOk = 0, kNoHypothesis = 1, kInputError = 2, kTimeout = 3 };

struct Overrides {
  std::optional<std::uint32_t> depth;
  std::optional<std::uint32_t> max_clauses;
  std::optional<double> timeout;
  bool trace = false;
  bool json = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string task_name(const std::string& path) {
  auto slash = path.find_last_of('/');
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

ScenarioSpec load_scenario(const std::string& path, const Overrides& o) {
  ScenarioSpec s = parse_scenario(read_file(path));
  if (o.depth) s.options.depth_limit = *o.depth;
  if (o.max_clauses) s.options.max_clauses = *o.max_clauses;
  if (o.timeout) s.options.timeout_seconds = *o.timeout;
  return s;
}

int exit_for(LearnStatus s) {
  switch (s) {
    case LearnStatus::Found: return kOk;
    case LearnStatus::NoHypothesis: return kNoHypothesis;
    case LearnStatus::Timeout: return kTimeout;
  }
  return kNoHypothesis;
}

json stats_json(const std::string& task, const LearnResult& r) {
  json j;
  j["task"] = task;
  j["status"] = status_name(r.status);
  j["size"] = r.hypothesis ? r.hypothesis->size() : 0;
  j["nodes"] = r.stats.nodes;
  j["millis"] = r.stats.millis;
  j["sizes_tried"] = r.stats.sizes_tried;
  json clauses = json::array();
  if (r.hypothesis)
    for (const auto& c : r.hypothesis->clauses) clauses.push_back(print_clause(c));
  j["clauses"] = clauses;
  return j;
}

void print_stats(std::ostream& os, const std::string& task, const LearnResult& r) {
  os << task << ": " << status_name(r.status);
  if (r.hypothesis) os << ", " << r.hypothesis->size() << " clauses";
  os << ", " << r.stats.nodes << " nodes, " << r.stats.millis << " ms\n";
}

void write_program(const std::optional<std::string>& path, const Program& p) {
  if (!path) return;
  std::ofstream out(*path);
  if (!out) throw std::runtime_error("cannot write " + *path);
  out << print_program(p);
}

LearnConfig learn_config(const Overrides& o) {
  LearnConfig cfg;
  if (o.trace)
    cfg.on_candidate = [](const Hypothesis& h, bool passed) {
      std::cerr << (passed ? "accepted" : "rejected") << " candidate of size " << h.size() << '\n';
      for (const auto& c : h.clauses) std::cerr << "  " << print_clause(c) << '\n';
      return false;
    };
  return cfg;
}

int cmd_learn(const std::string& path, const Overrides& o, const std::optional<std::string>& out) {
  ScenarioSpec spec = load_scenario(path, o);
  LearnResult r = learn(spec, object_builtins(), learn_config(o));
  if (o.json) {
    std::cout << stats_json(task_name(path), r).dump(2) << '\n';
  } else {
    if (r.hypothesis) std::cout << print_program(r.hypothesis->program());
    print_stats(std::cerr, task_name(path), r);
  }
  if (r.hypothesis) {
    Program full = spec.bk;
    full.append(r.hypothesis->program());
    write_program(out, full);
  }
  return exit_for(r.status);
}

int cmd_chain(const std::vector<std::string>& paths, const Overrides& o,
              const std::optional<std::string>& out) {
  std::vector<std::pair<std::string, ScenarioSpec>> tasks;
  for (const auto& p : paths) tasks.emplace_back(task_name(p), load_scenario(p, o));
  SequenceResult r = learn_seq(tasks, object_builtins(), learn_config(o));
  std::size_t induced = 0;
  for (const auto& t : r.tasks)
    if (t.result.hypothesis) induced += t.result.hypothesis->size();
  if (o.json) {
    json j;
    j["tasks"] = json::array();
    for (const auto& t : r.tasks) j["tasks"].push_back(stats_json(t.name, t.result));
    j["induced"] = induced;
    j["failed_task"] = r.failed_task ? json(*r.failed_task) : json(nullptr);
    std::cout << j.dump(2) << '\n';
  } else {
    for (const auto& t : r.tasks) print_stats(std::cerr, t.name, t.result);
  }
  if (r.failed_task) {
    std::cerr << "task " << *r.failed_task << " (" << r.tasks.back().name << ") failed: "
              << status_name(r.tasks.back().result.status) << '\n';
    return exit_for(r.tasks.back().result.status);
  }
  std::cerr << "induced " << induced << " clauses\n";
  if (out) write_program(out, r.program);
  else if (!o.json) std::cout << print_program(r.program);
  return kOk;
}

Program load_programs(const std::vector<std::string>& paths) {
  Program p;
  for (const auto& path : paths) p.append(load_program_text(read_file(path)));
  return p;
}

int cmd_run(const std::vector<std::string>& paths, std::string term_text, const Overrides& o) {
  if (term_text.empty() || term_text == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    term_text = os.str();
  }
  Program p = load_programs(paths);
  Term t = parse_term(term_text);
  Term v = Term::fresh_var("V");
  SolveConfig cfg;
  cfg.depth_limit = o.depth.value_or(300);
  if (o.trace) cfg.trace = &std::cerr;
  SolveResult r = solve(p, object_builtins(), Atom("eval", {t, v}), cfg);
  std::string verdict = outcome_name(r.outcome);
  std::optional<std::string> value;
  if (is_proved(r.outcome)) value = print_term(apply_subst(std::get<Proved>(r.outcome).answer, v));
  if (o.json) {
    json j{{"outcome", verdict}, {"nodes", r.stats.nodes}};
    j["value"] = value ? json(*value) : json(nullptr);
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << (value ? *value : verdict) << '\n';
  }
  return kOk;
}

int cmd_check(const std::string& program, const std::string& corpus, const std::string& strategy,
              std::uint64_t fuel, const Overrides& o) {
  Program p = load_programs({program});
  std::vector<Term> terms = parse_term_lines(read_file(corpus));
  OracleConfig cfg{parse_strategy(strategy), fuel};
  ConformanceReport rep = conformance_check(p, terms, cfg, o.depth.value_or(300));
  if (o.json) {
    json j;
    j["checked"] = rep.checked;
    j["skipped"] = rep.skipped.size();
    j["violations"] = json::array();
    for (const auto& v : rep.violations)
      j["violations"].push_back({{"condition", v.condition}, {"term", print_term(v.term)}, {"detail", v.detail}});
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << format_report(rep);
  }
  return rep.ok() ? kOk : kNoHypothesis;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meta-interpretive learning of small-step semantics"};
  app.require_subcommand(1);
  Overrides o;
  std::optional<std::string> out;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--depth", o.depth, "Resolution depth limit");
    sub->add_flag("--json", o.json, "Machine-readable output");
    sub->add_flag("--trace", o.trace, "Trace resolution steps or candidates on stderr");
  };
  auto add_learning = [&](CLI::App* sub) {
    sub->add_option("--max-clauses", o.max_clauses, "Largest hypothesis size searched");
    sub->add_option("--timeout", o.timeout, "Wall-time cap per learn call, seconds");
    sub->add_option("-o,--output", out, "Write the full program (bk and induced clauses) here");
  };

  std::string scenario;
  auto* learn_cmd = app.add_subcommand("learn", "Induce rules for one scenario");
  learn_cmd->add_option("scenario", scenario, "Scenario file")->required();
  add_common(learn_cmd);
  add_learning(learn_cmd);

  std::vector<std::string> chain_paths;
  auto* chain_cmd = app.add_subcommand("chain", "Learn scenarios in sequence");
  chain_cmd->add_option("scenarios", chain_paths, "Scenario files in order")->required();
  add_common(chain_cmd);
  add_learning(chain_cmd);

  std::vector<std::string> run_paths;
  std::string term_text;
  auto* run_cmd = app.add_subcommand("run", "Evaluate a term under a program");
  run_cmd->add_option("programs", run_paths, "Program or scenario files")->required();
  run_cmd->add_option("-t,--term", term_text, "Object term (read from stdin when omitted)");
  add_common(run_cmd);

  std::string check_program, check_corpus, strategy = "eager";
  std::uint64_t fuel = 10000;
  auto* check_cmd = app.add_subcommand("check", "Compare a program with the reference interpreter");
  check_cmd->add_option("program", check_program, "Program file")->required();
  check_cmd->add_option("corpus", check_corpus, "One object term per line")->required();
  check_cmd->add_option("--strategy", strategy, "lazy or eager")->check(CLI::IsMember({"lazy", "eager"}));
  check_cmd->add_option("--fuel", fuel, "Reference interpreter step budget");
  add_common(check_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*learn_cmd) return cmd_learn(scenario, o, out);
    if (*chain_cmd) return cmd_chain(chain_paths, o, out);
    if (*run_cmd) return cmd_run(run_paths, term_text, o);
    if (*check_cmd) return cmd_check(check_program, check_corpus, strategy, fuel, o);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kInputError;
  } catch (const SemanticError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const BuiltinError& e) {
    std::cerr << "builtin error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
