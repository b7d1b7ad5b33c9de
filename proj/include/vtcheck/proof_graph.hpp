#ifndef VTCHECK_PROOF_GRAPH_HPP
#define VTCHECK_PROOF_GRAPH_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "vtcheck/parser.hpp"

namespace vtcheck {

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::optional<std::string> step;
  std::optional<std::string> rule;
  std::string message;
};

/// A subproof region: either opened by an anchor or by an assume that
/// follows at least one step (a lemma, closed by the next `subproof` step).
struct Region {
  enum class Kind { Anchor, Lemma };
  Kind kind = Kind::Anchor;
  std::size_t open = 0;                       // anchor or first assume
  std::optional<std::size_t> close;           // closing step
  int parent = -1;
  int depth = 1;
  std::vector<ContextEntry> context;          // anchor arguments
  std::vector<std::size_t> assumes;           // assumes local to the region
  std::vector<std::size_t> members;           // commands strictly inside
};

struct ProofDag {
  std::vector<ProofCommand> commands;
  std::vector<Region> regions;
  std::vector<int> region_of;  // innermost region of each command, -1 at top
  std::vector<int> closes;     // region closed by each command, or -1
  std::vector<std::vector<std::size_t>> premises;
  std::unordered_map<std::string, std::size_t> index;  // last definition
  std::vector<std::string> duplicates;

  const StepCmd* step(std::size_t i) const { return std::get_if<StepCmd>(&commands[i].body); }
  const AssumeCmd* assume(std::size_t i) const {
    return std::get_if<AssumeCmd>(&commands[i].body);
  }
  /// Index symbol of a command ("" for anchors and defines).
  std::string label(std::size_t i) const;
  /// Conclusion of an assume or step as a clause.
  Clause conclusion(std::size_t i) const;
  /// True iff `inner` is `outer` or nested inside it (-1 is the top level).
  bool within(int inner, int outer) const;
  int max_depth() const;
};

/// Resolves premises, matches anchors to their closing steps and builds the
/// region tree.  Throws StructureError for dangling or forward premises,
/// unclosed anchors and improperly nested regions.
ProofDag build_dag(std::vector<ProofCommand> commands);

/// Structural diagnostics: premise escape from a closed subproof, missing
/// final empty-clause step, undischarged assumptions, duplicate indices.
std::vector<Diagnostic> validate_structure(const ProofDag& dag);

/// Anchor arguments of every region containing command `i`, outermost first.
std::vector<ContextEntry> context_at(const ProofDag& dag, std::size_t i);

/// The substitution denoted by a context.
Substitution sigma_of(TermStore& store, const std::vector<ContextEntry>& context);

}  // namespace vtcheck

#endif  // VTCHECK_PROOF_GRAPH_HPP
