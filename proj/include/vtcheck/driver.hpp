#ifndef VTCHECK_DRIVER_HPP
#define VTCHECK_DRIVER_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "vtcheck/printer.hpp"
#include "vtcheck/rule_engine.hpp"

namespace vtcheck {

enum ExitCode : int { kExitValid = 0, kExitInvalid = 1, kExitError = 2 };

struct DriverOptions {
  CheckOptions check;
  PrintOptions print;
  bool json = false;
  std::optional<std::string> problem;  // path of an SMT-LIB problem with declarations
};

struct ProofStats {
  std::size_t steps = 0;  // assumes and steps
  std::map<std::string, std::size_t> rules;
  int max_depth = 0;
  std::size_t dag_nodes = 0;   // distinct terms
  double tree_nodes = 0;       // terms counted with repetition
  double sharing_ratio = 1.0;  // tree_nodes / dag_nodes
};

ProofStats compute_stats(TermStore& store, const ProofDag& dag);

// Each command reads the proof from `path`, writes its report to `out` and
// returns the exit code.  The *_text variants take the proof text directly.
int cmd_check(const std::string& path, const DriverOptions& options, std::ostream& out);
int cmd_print(const std::string& path, const DriverOptions& options, std::ostream& out);
int cmd_stats(const std::string& path, const DriverOptions& options, std::ostream& out);

int check_text(std::string_view proof, const DriverOptions& options, std::ostream& out);
int print_text(std::string_view proof, const DriverOptions& options, std::ostream& out);
int stats_text(std::string_view proof, const DriverOptions& options, std::ostream& out);

}  // namespace vtcheck

#endif  // VTCHECK_DRIVER_HPP
