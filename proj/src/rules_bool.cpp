// Propositional rules: clause templates, unary deductions, resolution and
// Boolean simplification.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "rules.hpp"

namespace vtcheck {

using detail::polarize;
using detail::same_clause;

namespace {

bool is_op(const TermNode& n, Op op) { return n.kind == Kind::App && n.op == op; }

// Candidate clauses for a template whose distinguished literal is `main`.
std::vector<Clause> template_candidates(TermStore& s, const std::string& rule, TermId main) {
  auto [core, neg] = polarize(s, main);
  const TermNode n = s.node(core);
  const std::vector<TermId>& k = n.children;
  auto N = [&](TermId t) { return s.mk_not(t); };
  std::vector<Clause> out;
  auto bool_eq = is_op(n, Op::Eq) && k.size() == 2 && s.is_bool(k[0]);
  auto orientations = [&](auto&& f) {
    f(k[0], k[1]);
    f(k[1], k[0]);
  };
  if (rule == "and_pos" && neg && is_op(n, Op::And)) {
    for (TermId x : k) out.push_back({main, x});
  } else if ((rule == "and_neg" || rule == "and_neq") && !neg && is_op(n, Op::And)) {
    Clause c{main};
    for (TermId x : k) c.push_back(N(x));
    out.push_back(c);
  } else if (rule == "or_pos" && neg && is_op(n, Op::Or)) {
    Clause c{main};
    c.insert(c.end(), k.begin(), k.end());
    out.push_back(c);
  } else if (rule == "or_neg" && !neg && is_op(n, Op::Or)) {
    for (TermId x : k) out.push_back({main, N(x)});
  } else if (rule == "implies_pos" && neg && is_op(n, Op::Implies)) {
    Clause c{main};
    for (std::size_t i = 0; i + 1 < k.size(); ++i) c.push_back(N(k[i]));
    c.push_back(k.back());
    out.push_back(c);
  } else if (rule == "implies_neg1" && !neg && is_op(n, Op::Implies)) {
    for (std::size_t i = 0; i + 1 < k.size(); ++i) out.push_back({main, k[i]});
  } else if (rule == "implies_neg2" && !neg && is_op(n, Op::Implies)) {
    out.push_back({main, N(k.back())});
  } else if (rule == "equiv_pos1" && neg && bool_eq) {
    orientations([&](TermId a, TermId b) { out.push_back({main, a, N(b)}); });
  } else if (rule == "equiv_pos2" && neg && bool_eq) {
    orientations([&](TermId a, TermId b) { out.push_back({main, N(a), b}); });
  } else if (rule == "equiv_neg1" && !neg && bool_eq) {
    orientations([&](TermId a, TermId b) { out.push_back({main, N(a), N(b)}); });
  } else if (rule == "equiv_neg2" && !neg && bool_eq) {
    orientations([&](TermId a, TermId b) { out.push_back({main, a, b}); });
  } else if (is_op(n, Op::Ite) && s.is_bool(core)) {
    TermId c = k[0], a = k[1], b = k[2];
    if (rule == "ite_pos1" && neg) out.push_back({main, c, b});
    if (rule == "ite_pos2" && neg) out.push_back({main, N(c), a});
    if (rule == "ite_neg1" && !neg) out.push_back({main, c, N(b)});
    if (rule == "ite_neg2" && !neg) out.push_back({main, N(c), N(a)});
  } else if (is_op(n, Op::Xor) && k.size() == 2) {
    TermId a = k[0], b = k[1];
    if (rule == "xor_pos1" && neg) out.push_back({main, a, b});
    if (rule == "xor_pos2" && neg) out.push_back({main, N(a), N(b)});
    if (rule == "xor_neg1" && !neg) out.push_back({main, a, N(b)});
    if (rule == "xor_neg2" && !neg) out.push_back({main, N(a), b});
  }
  return out;
}

// Candidate conclusions of a unary deduction from premise literal `p`.
std::vector<Clause> deduction_candidates(TermStore& s, const std::string& rule, TermId p) {
  auto [core, neg] = polarize(s, p);
  const TermNode n = s.node(core);
  const std::vector<TermId>& k = n.children;
  auto N = [&](TermId t) { return s.mk_not(t); };
  std::vector<Clause> out;
  bool bool_eq = is_op(n, Op::Eq) && k.size() == 2 && s.is_bool(k[0]);
  auto orientations = [&](auto&& f) {
    f(k[0], k[1]);
    f(k[1], k[0]);
  };
  if (rule == "implies" && !neg && is_op(n, Op::Implies)) {
    Clause c;
    for (std::size_t i = 0; i + 1 < k.size(); ++i) c.push_back(N(k[i]));
    c.push_back(k.back());
    out.push_back(c);
  } else if (rule == "not_implies1" && neg && is_op(n, Op::Implies)) {
    for (std::size_t i = 0; i + 1 < k.size(); ++i) out.push_back({k[i]});
  } else if (rule == "not_implies2" && neg && is_op(n, Op::Implies)) {
    out.push_back({N(k.back())});
  } else if (rule == "equiv1" && !neg && bool_eq) {
    orientations([&](TermId a, TermId b) { out.push_back({N(a), b}); });
  } else if (rule == "equiv2" && !neg && bool_eq) {
    orientations([&](TermId a, TermId b) { out.push_back({a, N(b)}); });
  } else if (rule == "not_equiv1" && neg && bool_eq) {
    orientations([&](TermId a, TermId b) { out.push_back({a, b}); });
  } else if (rule == "not_equiv2" && neg && bool_eq) {
    orientations([&](TermId a, TermId b) { out.push_back({N(a), N(b)}); });
  } else if (rule == "and" && !neg && is_op(n, Op::And)) {
    for (TermId x : k) out.push_back({x});
  } else if (rule == "not_or" && neg && is_op(n, Op::Or)) {
    for (TermId x : k) out.push_back({N(x)});
  } else if (rule == "or" && !neg && is_op(n, Op::Or)) {
    out.push_back(k);
  } else if (rule == "not_and" && neg && is_op(n, Op::And)) {
    Clause c;
    for (TermId x : k) c.push_back(N(x));
    out.push_back(c);
  } else if (is_op(n, Op::Xor) && k.size() == 2) {
    TermId a = k[0], b = k[1];
    if (rule == "xor1" && !neg) out.push_back({a, b});
    if (rule == "xor2" && !neg) out.push_back({N(a), N(b)});
    if (rule == "not_xor1" && neg) out.push_back({a, N(b)});
    if (rule == "not_xor2" && neg) out.push_back({N(a), b});
  } else if (is_op(n, Op::Ite) && s.is_bool(core)) {
    TermId c = k[0], a = k[1], b = k[2];
    if (rule == "ite1" && !neg) out.push_back({c, b});
    if (rule == "ite2" && !neg) out.push_back({N(c), a});
    if (rule == "not_ite1" && neg) out.push_back({c, N(b)});
    if (rule == "not_ite2" && neg) out.push_back({N(c), N(a)});
  }
  return out;
}

// Small DPLL solver over integer literals (±(var+1)).
class Dpll {
 public:
  explicit Dpll(std::vector<std::vector<int>> clauses, int vars)
      : clauses_(std::move(clauses)), value_(vars + 1, 0) {}

  bool satisfiable() { return search(); }

 private:
  int lit_value(int l) const {
    int v = value_[std::abs(l)];
    return l > 0 ? v : -v;
  }

  // Returns false on conflict; records assigned variables in `trail`.
  bool propagate(std::vector<int>& trail) {
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& c : clauses_) {
        int unassigned = 0, last = 0;
        bool sat = false;
        for (int l : c) {
          int v = lit_value(l);
          if (v > 0) {
            sat = true;
            break;
          }
          if (v == 0) {
            ++unassigned;
            last = l;
          }
        }
        if (sat) continue;
        if (unassigned == 0) return false;
        if (unassigned == 1) {
          value_[std::abs(last)] = last > 0 ? 1 : -1;
          trail.push_back(std::abs(last));
          changed = true;
        }
      }
    }
    return true;
  }

  bool search() {
    std::vector<int> trail;
    if (!propagate(trail)) {
      for (int v : trail) value_[v] = 0;
      return false;
    }
    int pick = 0;
    for (std::size_t v = 1; v < value_.size(); ++v)
      if (value_[v] == 0) {
        pick = static_cast<int>(v);
        break;
      }
    if (pick == 0) return true;
    for (int val : {1, -1}) {
      value_[pick] = val;
      if (search()) return true;
    }
    value_[pick] = 0;
    for (int v : trail) value_[v] = 0;
    return false;
  }

  std::vector<std::vector<int>> clauses_;
  std::vector<int> value_;
};

// Premise clauses plus the disjuncts of unit `or` premises.
std::vector<Clause> with_flattened_or(TermStore& store, const std::vector<Clause>& premises) {
  std::vector<Clause> out = premises;
  for (const Clause& c : premises) {
    if (c.size() != 1) continue;
    auto [core, neg] = polarize(store, c[0]);
    if (!neg && store.is_app(core, Op::Or)) out.push_back(store.node(core).children);
  }
  return out;
}

std::set<LiteralKey> key_set(TermStore& store, const Clause& c) {
  auto keys = detail::keys_of(store, c);
  return {keys.begin(), keys.end()};
}

// Greedy linear resolution chain in premise order.
bool chain_resolves(TermStore& store, const std::vector<Clause>& premises,
                    const Clause& conclusion) {
  if (premises.empty()) return false;
  std::set<LiteralKey> cur = key_set(store, premises[0]);
  for (std::size_t i = 1; i < premises.size(); ++i) {
    std::set<LiteralKey> next = key_set(store, premises[i]);
    std::optional<LiteralKey> pivot;
    for (const LiteralKey& k : cur)
      if (next.count({k.atom, !k.negated})) {
        pivot = k;
        break;
      }
    if (!pivot) return false;
    cur.erase(*pivot);
    next.erase({pivot->atom, !pivot->negated});
    cur.insert(next.begin(), next.end());
  }
  return cur == key_set(store, conclusion);
}

// --- Boolean abstraction ----------------------------------------------------

enum class Gate { Atom, True, False, Not, And, Or, Implies, Xor, Iff, Ite, Distinct };

struct Node {
  Gate gate;
  std::vector<int> kids;
  int atom = -1;
};

class Abstraction {
 public:
  Abstraction(TermStore& store, bool expand_bool_args)
      : store_(store), expand_bool_args_(expand_bool_args) {}

  int add(TermId t) {
    if (auto it = memo_.find(t); it != memo_.end()) return it->second;
    const TermNode n = store_.node(t);
    Node node{Gate::Atom, {}, -1};
    bool structural = false;
    if (n.kind == Kind::Const && n.sort == store_.bool_sort()) {
      node.gate = n.value == 1 ? Gate::True : Gate::False;
      structural = true;
    } else if (n.kind == Kind::App && store_.is_bool(t)) {
      structural = true;
      switch (n.op) {
        case Op::Not: node.gate = Gate::Not; break;
        case Op::And: node.gate = Gate::And; break;
        case Op::Or: node.gate = Gate::Or; break;
        case Op::Implies: node.gate = Gate::Implies; break;
        case Op::Xor: node.gate = Gate::Xor; break;
        case Op::Ite: node.gate = Gate::Ite; break;
        case Op::Eq:
          structural = store_.is_bool(n.children[0]);
          node.gate = Gate::Iff;
          break;
        case Op::Distinct:
          structural = store_.is_bool(n.children[0]);
          node.gate = Gate::Distinct;
          break;
        default: structural = false;
      }
    } else if (n.kind == Kind::Binder && n.binder != BinderKind::Choice) {
      TermId q = normalize_quantifier(t);
      if (q != t) {
        int r = add(q);
        memo_.emplace(t, r);
        return r;
      }
    }
    if (!structural && expand_bool_args_ && n.kind == Kind::App) {
      if (auto b = bool_argument(t)) {
        // p(..b..) is equivalent to (ite b p(..true..) p(..false..)).
        std::unordered_map<TermId, TermId, TermIdHash> m1, m2;
        TermId hi = replace(t, *b, store_.boolean(true), m1);
        TermId lo = replace(t, *b, store_.boolean(false), m2);
        int r = add(store_.app(Op::Ite, {*b, hi, lo}));
        memo_.emplace(t, r);
        return r;
      }
    }
    if (structural) {
      for (TermId c : n.children) node.kids.push_back(add(c));
    } else {
      TermId key = store_.canonical(t);
      auto [it, inserted] = atoms_.emplace(key, static_cast<int>(atoms_.size()));
      node.atom = it->second;
    }
    nodes_.push_back(std::move(node));
    int id = static_cast<int>(nodes_.size()) - 1;
    memo_.emplace(t, id);
    return id;
  }

  std::size_t atom_count() const { return atoms_.size(); }

  // True iff the disjunction of `roots` holds under every valuation.
  bool valid_disjunction(const std::vector<int>& roots) const {
    const std::size_t n = atoms_.size();
    std::vector<char> value(nodes_.size());
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      for (std::size_t i = 0; i < nodes_.size(); ++i) value[i] = eval(nodes_[i], value, mask);
      bool any = false;
      for (int r : roots) any = any || value[r];
      if (!any) return false;
    }
    return true;
  }

 private:
  static char eval(const Node& node, const std::vector<char>& v, std::uint64_t mask) {
    const auto& k = node.kids;
    switch (node.gate) {
      case Gate::Atom: return (mask >> node.atom) & 1;
      case Gate::True: return 1;
      case Gate::False: return 0;
      case Gate::Not: return !v[k[0]];
      case Gate::And:
        for (int c : k)
          if (!v[c]) return 0;
        return 1;
      case Gate::Or:
        for (int c : k)
          if (v[c]) return 1;
        return 0;
      case Gate::Implies: {
        // Right associative: a1 => (a2 => ... an).
        char r = v[k.back()];
        for (std::size_t i = k.size() - 1; i-- > 0;) r = !v[k[i]] || r;
        return r;
      }
      case Gate::Xor: {
        char r = 0;
        for (int c : k) r ^= v[c];
        return r;
      }
      case Gate::Iff:
        for (int c : k)
          if (v[c] != v[k[0]]) return 0;
        return 1;
      case Gate::Distinct:
        for (std::size_t i = 0; i < k.size(); ++i)
          for (std::size_t j = i + 1; j < k.size(); ++j)
            if (v[k[i]] == v[k[j]]) return 0;
        return 1;
      case Gate::Ite: return v[k[0]] ? v[k[1]] : v[k[2]];
    }
    return 0;
  }

  // Merges nested binders of the same kind, drops unused variables and
  // expands Boolean variables.  All steps preserve equivalence.
  TermId normalize_quantifier(TermId t) {
    const TermNode n = store_.node(t);
    std::vector<TermId> vars = n.bound_vars();
    TermId body = n.body();
    for (;;) {
      const TermNode& b = store_.node(body);
      if (b.kind != Kind::Binder || b.binder != n.binder) break;
      std::vector<TermId> inner = b.bound_vars();
      // An inner rebinding shadows the outer variable.
      for (TermId v : inner) vars.erase(std::remove(vars.begin(), vars.end(), v), vars.end());
      vars.insert(vars.end(), inner.begin(), inner.end());
      body = store_.node(body).body();
    }
    std::vector<TermId> used;
    for (TermId v : vars)
      if (store_.occurs_free(v, body) && std::find(used.begin(), used.end(), v) == used.end())
        used.push_back(v);
    auto boolean = std::find_if(used.begin(), used.end(),
                                [&](TermId v) { return store_.is_bool(v); });
    if (boolean != used.end()) {
      TermId v = *boolean;
      used.erase(boolean);
      auto instance = [&](bool value) {
        Substitution s;
        s.mappings.emplace_back(v, store_.boolean(value));
        TermId inst = store_.apply_subst(body, s);
        return used.empty() ? inst : store_.binder(n.binder, used, inst);
      };
      Op join = n.binder == BinderKind::Forall ? Op::And : Op::Or;
      return store_.app(join, {instance(true), instance(false)});
    }
    if (used.empty()) return body;
    return store_.binder(n.binder, used, body);
  }

  // A non-constant Boolean argument of an uninterpreted function inside
  // `t`, outside every binder.
  std::optional<TermId> bool_argument(TermId t) {
    const TermNode& n = store_.node(t);
    if (n.kind != Kind::App) return std::nullopt;
    for (TermId c : n.children) {
      if (n.op == Op::Uf && store_.is_bool(c) && !store_.node(c).is_bool_const()) return c;
      if (auto b = bool_argument(c)) return b;
    }
    return std::nullopt;
  }

  TermId replace(TermId t, TermId from, TermId to,
                 std::unordered_map<TermId, TermId, TermIdHash>& memo) {
    if (t == from) return to;
    if (auto it = memo.find(t); it != memo.end()) return it->second;
    const TermNode n = store_.node(t);
    TermId out = t;
    if (n.kind == Kind::App && !n.children.empty()) {
      std::vector<TermId> kids;
      for (TermId c : n.children) kids.push_back(replace(c, from, to, memo));
      if (kids != n.children) out = store_.rebuild(t, kids);
    }
    memo.emplace(t, out);
    return out;
  }

  TermStore& store_;
  bool expand_bool_args_;
  std::vector<Node> nodes_;
  std::unordered_map<TermId, int, TermIdHash> memo_;
  std::map<TermId, int> atoms_;
};

}  // namespace

Outcome check_tautology_template(TermStore& store, const std::string& rule, const Clause& clause) {
  if (rule == "true") {
    return same_clause(store, {store.boolean(true)}, clause)
               ? Outcome::valid()
               : Outcome::invalid("expected (cl true)");
  }
  if (rule == "false") {
    return same_clause(store, {store.mk_not(store.boolean(false))}, clause)
               ? Outcome::valid()
               : Outcome::invalid("expected (cl (not false))");
  }
  if (rule == "ite_intro") return detail::check_ite_intro(store, clause);
  if (rule == "distinct_elim") return detail::check_distinct_elim(store, clause);
  if (rule.rfind("eq_", 0) == 0) return detail::check_eq_template(store, rule, clause);
  for (TermId main : clause)
    for (const Clause& expected : template_candidates(store, rule, main))
      if (same_clause(store, expected, clause)) return Outcome::valid();
  return Outcome::invalid("clause is not an instance of the " + rule + " schema");
}

Outcome check_unary_deduction(TermStore& store, const std::string& rule, const Clause& premise,
                              const Clause& clause, bool exact_order) {
  if (premise.size() != 1) return Outcome::invalid(rule + " expects a unit premise");
  auto candidates = deduction_candidates(store, rule, premise[0]);
  if (candidates.empty())
    return Outcome::invalid("premise " + term_to_string(store, premise[0]) + " has the wrong shape for " +
                            rule);
  for (const Clause& expected : candidates)
    if (same_clause(store, expected, clause, exact_order)) return Outcome::valid();
  return Outcome::invalid(std::string("clause does not match the conclusion of ") + rule +
                          (exact_order ? " (literal order is checked in strict mode)" : ""));
}

bool prop_entails(TermStore& store, const std::vector<Clause>& premises, const Clause& conclusion) {
  std::map<TermId, int> vars;
  auto lit = [&](const LiteralKey& k) {
    auto [it, inserted] = vars.emplace(k.atom, static_cast<int>(vars.size()) + 1);
    return k.negated ? -it->second : it->second;
  };
  std::vector<std::vector<int>> clauses;
  for (const Clause& c : premises) {
    std::vector<int> ints;
    for (const LiteralKey& k : detail::keys_of(store, c)) ints.push_back(lit(k));
    clauses.push_back(std::move(ints));
  }
  for (const LiteralKey& k : detail::keys_of(store, conclusion)) clauses.push_back({-lit(k)});
  return !Dpll(std::move(clauses), static_cast<int>(vars.size())).satisfiable();
}

Outcome check_resolution(TermStore& store, const std::vector<Clause>& premises,
                         const Clause& conclusion) {
  if (chain_resolves(store, premises, conclusion)) return Outcome::valid();
  if (prop_entails(store, with_flattened_or(store, premises), conclusion)) return Outcome::valid();
  return Outcome::invalid("conclusion is not a propositional consequence of the premises");
}

Outcome check_bool_simplify(TermStore& store, const std::string& rule, const Clause& clause,
                            unsigned atom_bound) {
  Abstraction abs(store, rule == "tmp_bfun_elim");
  std::vector<int> roots;
  for (TermId lit : clause) roots.push_back(abs.add(lit));
  if (abs.atom_count() > atom_bound || abs.atom_count() > 62)
    return Outcome::unchecked(std::to_string(abs.atom_count()) +
                              " atoms exceed the valuation bound of " + std::to_string(atom_bound));
  if (abs.valid_disjunction(roots)) return Outcome::valid();
  return Outcome::invalid(rule + ": clause is not valid under the Boolean abstraction");
}

namespace detail {

Outcome check_ite_intro(TermStore& store, const Clause& clause) {
  if (clause.size() != 1) return Outcome::invalid("ite_intro expects one literal");
  auto eq = positive_equality(store, clause[0]);
  if (!eq) return Outcome::invalid("ite_intro expects an equality");
  for (int pass = 0; pass < 2; ++pass) {
    auto [t, u] = pass == 0 ? *eq : std::make_pair(eq->second, eq->first);
    std::vector<TermId> conj;
    if (store.is_app(u, Op::And))
      conj = store.node(u).children;
    else
      conj = {u};
    if (!same_term(store, conj[0], t)) continue;
    bool ok = true;
    for (std::size_t i = 1; i < conj.size() && ok; ++i) {
      // (ite c (= s a) (= s b)) with s = (ite c a b).
      const TermNode c = store.node(conj[i]);
      ok = false;
      if (!is_op(c, Op::Ite)) break;
      auto e1 = positive_equality(store, c.children[1]);
      auto e2 = positive_equality(store, c.children[2]);
      if (!e1 || !e2) break;
      for (auto [s1, a] : {*e1, std::make_pair(e1->second, e1->first)})
        for (auto [s2, b] : {*e2, std::make_pair(e2->second, e2->first)})
          if (s1 == s2 && store.is_app(s1, Op::Ite)) {
            const auto& k = store.node(s1).children;
            if (same_term(store, k[0], c.children[0]) && same_term(store, k[1], a) &&
                same_term(store, k[2], b))
              ok = true;
          }
    }
    if (ok) return Outcome::valid();
  }
  return Outcome::invalid("clause is not an ite_intro instance");
}

Outcome check_distinct_elim(TermStore& store, const Clause& clause) {
  if (clause.size() != 1) return Outcome::invalid("distinct_elim expects one literal");
  auto eq = positive_equality(store, clause[0]);
  if (!eq) return Outcome::invalid("distinct_elim expects an equality");
  for (int pass = 0; pass < 2; ++pass) {
    auto [d, r] = pass == 0 ? *eq : std::make_pair(eq->second, eq->first);
    if (!store.is_app(d, Op::Distinct)) continue;
    const std::vector<TermId> k = store.node(d).children;
    std::vector<TermId> expected;
    if (store.is_bool(k[0]) && k.size() > 2) {
      expected.push_back(store.boolean(false));
    } else if (k.size() == 2) {
      expected.push_back(store.mk_not(store.mk_eq(k[0], k[1])));
    } else {
      std::vector<TermId> pairs;
      for (std::size_t i = 0; i < k.size(); ++i)
        for (std::size_t j = i + 1; j < k.size(); ++j)
          pairs.push_back(store.mk_not(store.mk_eq(k[i], k[j])));
      expected.push_back(store.app(Op::And, pairs));
    }
    for (TermId e : expected)
      if (same_term(store, e, r)) return Outcome::valid();
  }
  return Outcome::invalid("clause is not a distinct_elim instance");
}

}  // namespace detail

}  // namespace vtcheck
