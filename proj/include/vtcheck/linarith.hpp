#ifndef VTCHECK_LINARITH_HPP
#define VTCHECK_LINARITH_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vtcheck/term.hpp"

namespace vtcheck {

enum class Rel { Le, Lt, Eq, Ne };

std::string_view rel_symbol(Rel r);

/// Σ coeffs[x]·x + constant  REL  0.  Variables are maximal non-arithmetic
/// subterms, compared modulo the implicit transformations.
struct LinearAtom {
  std::map<TermId, Rational> coeffs;
  Rational constant;
  Rel rel = Rel::Le;
  std::set<TermId> int_vars;

  bool ground() const { return coeffs.empty(); }
  /// Truth value of a ground atom.
  bool ground_value() const;
  bool all_int() const { return int_vars.size() == coeffs.size(); }

  bool operator==(const LinearAtom& other) const {
    return coeffs == other.coeffs && constant == other.constant && rel == other.rel;
  }
};

std::string to_string(const TermStore& store, const LinearAtom& a);

/// Linear atom of a literal; negations are pushed into the relation.
/// Returns nullopt when the literal is not an arithmetic comparison and
/// throws NonlinearError on products of non-constant terms.
std::optional<LinearAtom> atom_of_term(TermStore& store, TermId t);

/// Gcd tightening of an all-Int atom: strict becomes non-strict by adding
/// one, coefficients are divided by their gcd and the constant is rounded
/// toward the feasible side.
LinearAtom integer_tighten(const LinearAtom& a);

/// A cut: the tightening of a non-negative combination of earlier rows
/// (inputs first, then earlier cuts).
struct Cut {
  std::vector<Rational> multipliers;
};

/// Multipliers over the input atoms followed by the cuts.  Multipliers of
/// inequalities are non-negative; equalities may take either sign.
struct FarkasCertificate {
  std::vector<Rational> multipliers;
  std::vector<Cut> cuts;
  LinearAtom derived;
};

enum class FmStatus { Sat, Unsat, ResourceOut };

struct FmBranch {
  std::vector<LinearAtom> system;  // disequalities replaced by a strict side
  FarkasCertificate certificate;
};

struct FmResult {
  FmStatus status = FmStatus::Sat;
  /// One refutation per disequality case split (a single one if the input
  /// has no disequality).  Empty unless status is Unsat.
  std::vector<FmBranch> branches;
};

struct FmLimits {
  std::size_t max_rows = 20000;
  std::size_t max_splits = 10;
};

/// Fourier–Motzkin elimination.  Complete over the rationals; with
/// `tighten`, rows over Int variables only are tightened after every
/// derivation.
FmResult fm_decide(const std::vector<LinearAtom>& system, bool tighten, FmLimits limits = {});

/// Exact replay of a certificate against a system without disequalities.
bool verify_certificate(const std::vector<LinearAtom>& system, const FarkasCertificate& cert);

struct LaOutcome {
  enum class Kind { Valid, Invalid, Unchecked };
  Kind kind = Kind::Valid;
  std::string reason;
};

/// la_generic, lia_generic, la_disequality, la_tautology, la_totality and
/// la_rw_eq on a premise-free clause.
LaOutcome check_la_rule(TermStore& store, const std::string& rule, const Clause& clause);

}  // namespace vtcheck

#endif  // VTCHECK_LINARITH_HPP
