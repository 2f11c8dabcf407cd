// Writes random object-term corpora (one term per line) for the check command.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "milsem/object_lang.hpp"
#include "milsem/textio.hpp"

int main(int argc, char** argv) {
  using namespace milsem;
  CLI::App app{"Generate an object-term corpus"};
  std::string constructs = "all", required = "any", strategy = "eager", out;
  std::size_t count = 30;
  std::uint64_t seed = 1, max_steps = 12;
  int depth = 3;
  app.add_option("--constructs", constructs, "Comma list: lambda,pairs,lists,conditionals,arith or all");
  app.add_option("--require", required, "Construct every term must contain, or any");
  app.add_option("--count", count);
  app.add_option("--seed", seed);
  app.add_option("--depth", depth, "Generator nesting depth");
  app.add_option("--max-steps", max_steps, "Keep terms the oracle evaluates within this many steps");
  app.add_option("--strategy", strategy)->check(CLI::IsMember({"lazy", "eager"}));
  app.add_option("-o,--output", out)->required();
  CLI11_PARSE(app, argc, argv);

  auto mask_of = [](const std::string& list) {
    unsigned m = 0;
    std::size_t start = 0;
    while (start <= list.size()) {
      auto end = list.find(',', start);
      if (end == std::string::npos) end = list.size();
      std::string w = list.substr(start, end - start);
      if (w == "all") m |= kAll;
      else if (w == "lambda") m |= kLambda;
      else if (w == "pairs") m |= kPairs;
      else if (w == "lists") m |= kLists;
      else if (w == "conditionals") m |= kConditionals;
      else if (w == "arith") m |= kArith;
      else if (w != "any") throw std::invalid_argument("unknown construct " + w);
      start = end + 1;
    }
    return m;
  };

  TermGenOptions opts;
  opts.constructs = mask_of(constructs);
  opts.max_depth = depth;
  OracleConfig cfg{parse_strategy(strategy), max_steps};
  std::mt19937_64 rng(seed);
  auto terms = random_evaluating_terms(rng, count, opts, mask_of(required), cfg);
  std::ofstream os(out);
  for (const auto& t : terms) os << print_term(t) << '\n';
  std::cerr << "wrote " << terms.size() << " terms to " << out << '\n';
  return terms.size() == count ? 0 : 1;
}
