#ifndef VTCHECK_TERM_HPP
#define VTCHECK_TERM_HPP

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "vtcheck/errors.hpp"

namespace vtcheck {

using Rational = mpq_class;
using Integer = mpz_class;

/// Handle to an interned term.  Two handles are equal iff the terms are
/// structurally identical.
struct TermId {
  std::uint32_t value = UINT32_MAX;

  constexpr bool valid() const { return value != UINT32_MAX; }
  constexpr auto operator<=>(const TermId&) const = default;
};

struct SortId {
  std::uint32_t value = UINT32_MAX;

  constexpr bool valid() const { return value != UINT32_MAX; }
  constexpr auto operator<=>(const SortId&) const = default;
};

enum class SortKind : std::uint8_t { Bool, Int, Real, Uninterpreted };

struct Sort {
  SortKind kind;
  std::string name;
};

enum class Kind : std::uint8_t { Var, Const, App, Binder };

enum class Op : std::uint8_t {
  Uf,
  Not,
  And,
  Or,
  Implies,
  Xor,
  Eq,
  Distinct,
  Ite,
  Add,
  Sub,
  Mul,
  Div,
  Lt,
  Le,
  Gt,
  Ge,
  IntDiv,
  Mod,
  Abs,
  ToReal,
  ToInt,
  IsInt,
};

enum class BinderKind : std::uint8_t { Forall, Exists, Choice };

std::optional<Op> builtin_op(std::string_view symbol);
std::string_view op_symbol(Op op);
std::string_view binder_symbol(BinderKind kind);

struct TermNode {
  Kind kind = Kind::Const;
  Op op = Op::Uf;
  BinderKind binder = BinderKind::Forall;
  SortId sort;
  std::string name;  // variable name or uninterpreted head
  Rational value;    // numeral value; 0/1 for Boolean constants
  // App: arguments.  Binder: bound variables followed by the body.
  std::vector<TermId> children;

  bool operator==(const TermNode& other) const;

  bool is_bool_const() const;
  TermId body() const { return children.back(); }
  std::vector<TermId> bound_vars() const {
    return {children.begin(), children.end() - 1};
  }
};

/// Function symbol rank: argument sorts and result sort.
struct Rank {
  std::vector<SortId> args;
  SortId result;

  bool operator==(const Rank&) const = default;
};

/// Simultaneous substitution of variables (Var terms) by terms.
struct Substitution {
  std::vector<std::pair<TermId, TermId>> mappings;

  bool empty() const { return mappings.empty(); }
  std::optional<TermId> lookup(TermId var) const;
};

struct TermIdHash {
  std::size_t operator()(TermId t) const noexcept {
    return std::hash<std::uint32_t>{}(t.value);
  }
};

struct TermNodeHash {
  std::size_t operator()(const TermNode& n) const noexcept;
};

/// Hash-consed store of sorted terms.  Every structurally distinct term is
/// stored exactly once, so term equality is handle equality.
///
/// The store is not internally synchronized; callers sharing one store across
/// threads must serialize access.
class TermStore {
 public:
  TermStore();

  TermStore(const TermStore&) = delete;
  TermStore& operator=(const TermStore&) = delete;

  // Sorts.
  SortId bool_sort() const { return SortId{0}; }
  SortId int_sort() const { return SortId{1}; }
  SortId real_sort() const { return SortId{2}; }
  SortId uninterpreted_sort(std::string_view name);
  const Sort& sort(SortId id) const { return sorts_[id.value]; }
  std::optional<SortId> find_sort(std::string_view name) const;
  bool is_numeric(SortId s) const { return s == int_sort() || s == real_sort(); }

  // Signature of uninterpreted function symbols.
  void declare_fun(std::string_view name, Rank rank);
  const Rank* rank(std::string_view name) const;

  // Construction.  All constructors validate sorts and throw SortError.
  TermId intern(TermNode node);
  TermId var(std::string_view name, SortId sort);
  TermId boolean(bool value);
  TermId numeral(const Rational& value, SortId sort);
  TermId app(Op op, std::vector<TermId> args);
  TermId app(std::string_view fn, std::vector<TermId> args, SortId result);
  TermId binder(BinderKind kind, std::vector<TermId> vars, TermId body);
  TermId mk_not(TermId t) { return app(Op::Not, {t}); }
  TermId mk_eq(TermId a, TermId b) { return app(Op::Eq, {a, b}); }

  const TermNode& node(TermId t) const { return nodes_[t.value]; }
  SortId sort_of(TermId t) const { return nodes_[t.value].sort; }
  bool is_bool(TermId t) const { return sort_of(t) == bool_sort(); }
  bool is_app(TermId t, Op op) const {
    const auto& n = node(t);
    return n.kind == Kind::App && n.op == op;
  }
  std::size_t size() const { return nodes_.size(); }

  // Rebuilds `t` with new children (same head/binder/sort kind).
  TermId rebuild(TermId t, std::vector<TermId> children);

  // Queries.
  const std::vector<TermId>& free_vars(TermId t);
  bool occurs_free(TermId var, TermId t);
  TermId apply_subst(TermId t, const Substitution& subst);
  std::string fresh_var_name(std::string_view base);

  /// Strips every leading negation; returns the core and the count.
  std::pair<TermId, unsigned> strip_negations(TermId t) const;
  /// Equality reorientation applied at every depth.
  TermId eq_nf(TermId t);
  /// Top-level double negation removal plus eq_nf.
  TermId implicit_nf(TermId t);
  /// Canonical renaming of bound variables.
  TermId alpha_nf(TermId t);
  /// implicit_nf(alpha_nf(t)); the comparison used by the rule checkers.
  TermId canonical(TermId t);

 private:
  TermId alpha_nf_at(TermId t, std::uint32_t depth);
  TermId apply_subst_rec(TermId t, const Substitution& subst,
                         std::unordered_map<TermId, TermId, TermIdHash>& memo);
  SortId check_app(Op op, const std::vector<TermId>& args) const;

  std::vector<Sort> sorts_;
  std::unordered_map<std::string, SortId> sort_index_;
  std::unordered_map<std::string, Rank> signature_;

  std::vector<TermNode> nodes_;
  std::unordered_map<TermNode, TermId, TermNodeHash> index_;
  std::unordered_set<std::string> var_names_;
  std::uint64_t fresh_counter_ = 0;

  std::unordered_map<TermId, std::vector<TermId>, TermIdHash> free_vars_;
  std::unordered_map<TermId, TermId, TermIdHash> eq_nf_;
  std::map<std::pair<TermId, std::uint32_t>, TermId> alpha_nf_;
  std::unordered_map<TermId, TermId, TermIdHash> canonical_;
};

// Term-level operations on the implicit transformations of the proof format.

struct NegationSplit {
  TermId core;
  unsigned negations = 0;
};

NegationSplit strip_double_negation(const TermStore& store, TermId t);

/// Complementary literals: equal cores (modulo equality orientation) and
/// leading-negation counts of different parity.
bool complementary(TermStore& store, TermId a, TermId b);
bool equal_mod_implicit(TermStore& store, TermId a, TermId b);
bool alpha_equiv(TermStore& store, TermId a, TermId b);
TermId apply_subst(TermStore& store, TermId t, const Substitution& subst);

/// Substitution composition: applying `first` then `second`.
Substitution compose(TermStore& store, const Substitution& first,
                     const Substitution& second);

using Clause = std::vector<TermId>;

struct NormalizedClause {
  bool tautology = false;
  Clause literals;
};

/// Removes repeated literals (keeping the first) and detects complementary
/// pairs.  Literals are compared modulo the implicit transformations and
/// bound-variable renaming.
NormalizedClause clause_normalize(TermStore& store, const Clause& lits);

/// Literal abstraction: canonical atom plus polarity (true = negated).
struct LiteralKey {
  TermId atom;
  bool negated = false;

  auto operator<=>(const LiteralKey&) const = default;
};
LiteralKey literal_key(TermStore& store, TermId lit);

std::string term_to_string(const TermStore& store, TermId t);
std::string quote_symbol(std::string_view symbol);

}  // namespace vtcheck

template <>
struct std::hash<vtcheck::TermId> {
  std::size_t operator()(vtcheck::TermId t) const noexcept {
    return std::hash<std::uint32_t>{}(t.value);
  }
};

#endif  // VTCHECK_TERM_HPP
