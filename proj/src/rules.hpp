// Internal interface between the rule engine and the rule families.
#ifndef VTCHECK_SRC_RULES_HPP
#define VTCHECK_SRC_RULES_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vtcheck/rule_engine.hpp"

namespace vtcheck::detail {

struct StepContext {
  TermStore& store;
  const ProofDag& dag;
  std::size_t command;
  const StepCmd& step;
  const CheckOptions& options;
  std::vector<Clause> premises;  // conclusions of the referenced commands
  std::vector<ContextEntry> context;
  Substitution sigma;
};

// Literal split into its core and the parity of its leading negations.
struct Polarized {
  TermId core;
  bool negated = false;
};
Polarized polarize(const TermStore& store, TermId lit);

// Distinct literal keys in order of first occurrence.
std::vector<LiteralKey> keys_of(TermStore& store, const Clause& clause);

// Clause comparison modulo the implicit transformations; with
// `exact_order` the de-duplicated literal sequences must coincide.
bool same_clause(TermStore& store, const Clause& expected, const Clause& actual,
                 bool exact_order = false);

bool same_term(TermStore& store, TermId a, TermId b);

// (lhs, rhs) of a positive binary equality literal.
std::optional<std::pair<TermId, TermId>> positive_equality(TermStore& store, TermId lit);

// The last assume or step directly inside `region`.
std::optional<std::size_t> last_inner_command(const ProofDag& dag, int region);

// Equality family (rules_equality.cpp).
Outcome check_refl(StepContext& ctx);
Outcome check_cong(StepContext& ctx);
Outcome check_trans(StepContext& ctx);
Outcome check_eq_template(TermStore& store, const std::string& rule, const Clause& clause);

// Binders and subproofs (rules_quant.cpp).
Outcome check_bind(StepContext& ctx);
Outcome check_sko(StepContext& ctx, bool existential);
Outcome check_let(StepContext& ctx);
Outcome check_subproof(StepContext& ctx);

// Special premise-free schemas (rules_bool.cpp).
Outcome check_ite_intro(TermStore& store, const Clause& clause);
Outcome check_distinct_elim(TermStore& store, const Clause& clause);

}  // namespace vtcheck::detail

#endif  // VTCHECK_SRC_RULES_HPP
