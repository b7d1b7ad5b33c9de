#ifndef VTCHECK_RULE_ENGINE_HPP
#define VTCHECK_RULE_ENGINE_HPP

#include <chrono>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "vtcheck/proof_graph.hpp"

namespace vtcheck {

enum class Verdict { Valid, Invalid, Unchecked };

std::string_view verdict_name(Verdict v);

struct StepResult {
  std::size_t command = 0;
  std::string index;
  std::string rule;
  Verdict verdict = Verdict::Valid;
  std::string reason;  // set for Invalid and Unchecked
  std::chrono::nanoseconds elapsed{0};
};

enum class CheckerKind {
  TautologyTemplate,
  Deduction,
  CtxEquality,
  Resolution,
  ForallInst,
  Sko,
  Bind,
  Let,
  SubproofDischarge,
  LaRule,
  BoolSimplify,
  Trusted,
};

/// Every rule name the checker knows, with the checker that handles it.
const std::map<std::string, CheckerKind>& rule_table();

struct CheckOptions {
  bool allow_unchecked = false;
  bool strict = false;
  std::set<std::string> skip_rules;
  unsigned atom_bound = 16;
};

struct CheckReport {
  std::vector<StepResult> steps;  // one per assume/step, in proof order
  std::vector<Diagnostic> diagnostics;
  bool valid = false;

  std::size_t count(Verdict v) const;
};

CheckReport check_proof(TermStore& store, const ProofDag& dag, const CheckOptions& options = {});

// Individual checkers, usable without a proof around them.

struct Outcome {
  Verdict verdict = Verdict::Valid;
  std::string reason;

  static Outcome valid() { return {}; }
  static Outcome invalid(std::string why) { return {Verdict::Invalid, std::move(why)}; }
  static Outcome unchecked(std::string why) { return {Verdict::Unchecked, std::move(why)}; }
  bool ok() const { return verdict == Verdict::Valid; }
};

/// Premise-free clause schemas (and_pos, equiv_pos2, eq_transitive, ...).
Outcome check_tautology_template(TermStore& store, const std::string& rule, const Clause& clause);

/// Single-premise deductions (implies, or, not_and, ite1, ...).  With
/// `exact_order`, the literals must come in the rule's order.
Outcome check_unary_deduction(TermStore& store, const std::string& rule, const Clause& premise,
                              const Clause& clause, bool exact_order = false);

/// Propositional entailment over the literal abstraction.
bool prop_entails(TermStore& store, const std::vector<Clause>& premises, const Clause& conclusion);

Outcome check_resolution(TermStore& store, const std::vector<Clause>& premises,
                         const Clause& conclusion);

Outcome check_forall_inst(TermStore& store, const Clause& clause, const std::vector<StepArg>& args);

Outcome check_bool_simplify(TermStore& store, const std::string& rule, const Clause& clause,
                            unsigned atom_bound = 16);

}  // namespace vtcheck

#endif  // VTCHECK_RULE_ENGINE_HPP
