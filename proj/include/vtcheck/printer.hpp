#ifndef VTCHECK_PRINTER_HPP
#define VTCHECK_PRINTER_HPP

#include <map>
#include <string>

#include "vtcheck/proof_graph.hpp"

namespace vtcheck {

/// Names for terms reached twice by the marking traversal: at two argument
/// positions, under two parents, or at the top of two commands.
struct NamingPlan {
  std::map<TermId, std::string> assignment;
  /// Largest number of times any single term was visited while unnamed.
  std::size_t max_visits = 0;
};

/// One traversal over every term of the proof, :args included.  Leaves and
/// terms with free variables are never named.  With `opaque_choice`, closed
/// choice terms are not descended into (they print as Skolem constants).
NamingPlan mark_shared(TermStore& store, const ProofDag& dag, bool opaque_choice = false);

struct PrintOptions {
  bool share = false;
  bool define_skolems = false;
};

/// One command per line.  With `share`, names from mark_shared are used
/// whenever naming shortens the output; with `define_skolems`, every closed
/// choice term is hoisted to a 0-ary define-fun before its first use.
std::string print_proof(TermStore& store, const ProofDag& dag, const PrintOptions& options = {});

}  // namespace vtcheck

#endif  // VTCHECK_PRINTER_HPP
