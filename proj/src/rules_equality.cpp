// Equality rules: refl, cong, trans and the eq_* tautologies.

#include <deque>
#include <map>
#include <set>

#include "rules.hpp"

namespace vtcheck::detail {

namespace {

using Edge = std::pair<TermId, TermId>;

// Canonical endpoints of the premise equalities; nullopt if a premise is
// not a unit equality.
std::optional<std::vector<Edge>> premise_equalities(StepContext& ctx) {
  std::vector<Edge> out;
  for (const Clause& c : ctx.premises) {
    if (c.size() != 1) return std::nullopt;
    auto eq = positive_equality(ctx.store, c[0]);
    if (!eq) return std::nullopt;
    out.emplace_back(ctx.store.canonical(eq->first), ctx.store.canonical(eq->second));
  }
  return out;
}

bool connected(TermId from, TermId to, const std::vector<Edge>& edges) {
  if (from == to) return true;
  std::map<TermId, std::vector<TermId>> adj;
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::set<TermId> seen{from};
  std::deque<TermId> queue{from};
  while (!queue.empty()) {
    TermId t = queue.front();
    queue.pop_front();
    for (TermId u : adj[t]) {
      if (u == to) return true;
      if (seen.insert(u).second) queue.push_back(u);
    }
  }
  return false;
}

bool has_edge(const std::vector<Edge>& edges, TermId a, TermId b) {
  for (auto [x, y] : edges)
    if ((x == a && y == b) || (x == b && y == a)) return true;
  return false;
}

bool same_head(const TermNode& a, const TermNode& b) {
  return a.kind == Kind::App && b.kind == Kind::App && a.op == b.op && a.name == b.name &&
         a.children.size() == b.children.size();
}

// Every argument pair is identical or justified by `edges` (canonical);
// `sigma` optionally applies the context to the left argument.
bool args_congruent(TermStore& s, const std::vector<TermId>& l, const std::vector<TermId>& r,
                    const std::vector<Edge>& edges, const Substitution* sigma) {
  for (std::size_t i = 0; i < l.size(); ++i) {
    TermId a = s.canonical(l[i]), b = s.canonical(r[i]);
    if (a == b || has_edge(edges, a, b)) continue;
    if (sigma && !sigma->empty() && s.canonical(s.apply_subst(l[i], *sigma)) == b) continue;
    return false;
  }
  return true;
}

bool congruent_apps(TermStore& s, TermId lhs, TermId rhs, const std::vector<Edge>& edges,
                    const Substitution* sigma) {
  const TermNode l = s.node(lhs), r = s.node(rhs);
  if (!same_head(l, r)) return false;
  if (args_congruent(s, l.children, r.children, edges, sigma)) return true;
  if (l.op == Op::Eq && l.children.size() == 2) {
    std::vector<TermId> swapped{r.children[1], r.children[0]};
    return args_congruent(s, l.children, swapped, edges, sigma);
  }
  return false;
}

}  // namespace

Outcome check_refl(StepContext& ctx) {
  TermStore& s = ctx.store;
  if (ctx.step.clause.size() != 1) return Outcome::invalid("refl expects one literal");
  auto eq = positive_equality(s, ctx.step.clause[0]);
  if (!eq) return Outcome::invalid("refl expects an equality");
  auto [l, r] = *eq;
  if (same_term(s, l, r)) return Outcome::valid();
  if (!ctx.sigma.empty()) {
    TermId ls = s.apply_subst(l, ctx.sigma), rs = s.apply_subst(r, ctx.sigma);
    if (same_term(s, ls, r) || same_term(s, ls, rs) || same_term(s, rs, l))
      return Outcome::valid();
  }
  return Outcome::invalid("the two sides differ after applying the context substitution");
}

Outcome check_cong(StepContext& ctx) {
  TermStore& s = ctx.store;
  if (ctx.step.clause.size() != 1) return Outcome::invalid("cong expects one literal");
  auto eq = positive_equality(s, ctx.step.clause[0]);
  if (!eq) return Outcome::invalid("cong expects an equality");
  auto edges = premise_equalities(ctx);
  if (!edges) return Outcome::invalid("every premise of cong must be a unit equality");
  if (!same_head(s.node(eq->first), s.node(eq->second)))
    return Outcome::invalid("the two sides do not share a function symbol");
  if (congruent_apps(s, eq->first, eq->second, *edges, &ctx.sigma)) return Outcome::valid();
  return Outcome::invalid("an argument pair is not justified by any premise");
}

Outcome check_trans(StepContext& ctx) {
  TermStore& s = ctx.store;
  if (ctx.step.clause.size() != 1) return Outcome::invalid("trans expects one literal");
  auto eq = positive_equality(s, ctx.step.clause[0]);
  if (!eq) return Outcome::invalid("trans expects an equality");
  auto edges = premise_equalities(ctx);
  if (!edges) return Outcome::invalid("every premise of trans must be a unit equality");
  if (connected(s.canonical(eq->first), s.canonical(eq->second), *edges)) return Outcome::valid();
  return Outcome::invalid("the premises do not form a chain between the two sides");
}

Outcome check_eq_template(TermStore& s, const std::string& rule, const Clause& clause) {
  std::vector<Edge> negated;
  std::vector<TermId> rest;
  for (TermId lit : clause) {
    auto [core, neg] = polarize(s, lit);
    const TermNode& n = s.node(core);
    if (neg && n.kind == Kind::App && n.op == Op::Eq && n.children.size() == 2)
      negated.emplace_back(s.canonical(n.children[0]), s.canonical(n.children[1]));
    else
      rest.push_back(lit);
  }
  if (rule == "eq_reflexive") {
    if (clause.size() == 1)
      if (auto eq = positive_equality(s, clause[0]); eq && same_term(s, eq->first, eq->second))
        return Outcome::valid();
    return Outcome::invalid("expected (cl (= t t))");
  }
  if (rule == "eq_transitive") {
    if (rest.size() == 1)
      if (auto eq = positive_equality(s, rest[0]))
        if (connected(s.canonical(eq->first), s.canonical(eq->second), negated))
          return Outcome::valid();
    return Outcome::invalid("the negated equalities do not chain the two sides");
  }
  if (rule == "eq_congruent") {
    if (rest.size() == 1)
      if (auto eq = positive_equality(s, rest[0]))
        if (congruent_apps(s, eq->first, eq->second, negated, nullptr)) return Outcome::valid();
    return Outcome::invalid("clause is not an eq_congruent instance");
  }
  if (rule == "eq_congruent_pred") {
    if (rest.size() == 1)
      if (auto eq = positive_equality(s, rest[0]))
        if (s.is_bool(eq->first) && congruent_apps(s, eq->first, eq->second, negated, nullptr))
          return Outcome::valid();
    if (rest.size() == 2) {
      for (int pass = 0; pass < 2; ++pass) {
        auto a = polarize(s, rest[pass]);
        auto b = polarize(s, rest[1 - pass]);
        if (a.negated && !b.negated && congruent_apps(s, a.core, b.core, negated, nullptr))
          return Outcome::valid();
      }
    }
    return Outcome::invalid("clause is not an eq_congruent_pred instance");
  }
  return Outcome::invalid("unknown equality schema " + rule);
}

}  // namespace vtcheck::detail
