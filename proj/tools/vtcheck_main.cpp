// vtcheck: check, re-print or summarize an Alethe proof.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "vtcheck/driver.hpp"

int main(int argc, char** argv) {
  using namespace vtcheck;
  CLI::App app{"Standalone checker for veriT/Alethe proofs"};
  app.require_subcommand(1);

  DriverOptions opts;
  std::string path;
  std::string skip;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("proof", path, "Proof file")->required();
    cmd->add_option("--problem", opts.problem, "SMT-LIB problem supplying declarations");
    cmd->add_flag("--json", opts.json, "One JSON object per line");
  };

  CLI::App* check = app.add_subcommand("check", "Check every step of a proof");
  add_common(check);
  check->add_flag("--strict", opts.check.strict,
                  "Exact literal order for deductions; warn on ignored args and context misuse");
  check->add_flag("--allow-unchecked", opts.check.allow_unchecked,
                  "Accept steps whose rule is trusted or out of reach");
  check->add_option("--skip-rules", skip, "Comma-separated rules to leave unchecked");
  check->add_option("--atom-bound", opts.check.atom_bound,
                    "Largest atom count for truth-table simplification rules")
      ->check(CLI::Range(1u, 62u));

  CLI::App* print = app.add_subcommand("print", "Re-emit a proof");
  add_common(print);
  print->add_flag("--share", opts.print.share, "Name repeated subterms with :named");
  print->add_flag("--define-skolems", opts.print.define_skolems,
                  "Hoist choice terms into define-fun commands");

  CLI::App* stats = app.add_subcommand("stats", "Proof statistics");
  add_common(stats);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }

  std::stringstream list(skip);
  for (std::string rule; std::getline(list, rule, ',');)
    if (!rule.empty()) opts.check.skip_rules.insert(rule);

  if (*check) return cmd_check(path, opts, std::cout);
  if (*print) return cmd_print(path, opts, std::cout);
  return cmd_stats(path, opts, std::cout);
}
