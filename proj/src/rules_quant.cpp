// Quantifier instantiation, binder rules and subproof discharge.

#include <algorithm>
#include <set>

#include "rules.hpp"

namespace vtcheck {

using detail::polarize;
using detail::same_term;

namespace {

// Pulls universal quantifiers (existential ones under negation) out of
// `t` into `vars`.  A variable is only pulled if no other occurrence in
// `root` could be captured.
TermId pull_quantifiers(TermStore& s, TermId t, bool positive, TermId root,
                        std::vector<TermId>& vars) {
  const TermNode n = s.node(t);
  if (n.kind == Kind::Binder) {
    bool pullable = (n.binder == BinderKind::Forall && positive) ||
                    (n.binder == BinderKind::Exists && !positive);
    if (!pullable) return t;
    for (TermId v : n.bound_vars())
      if (std::count(vars.begin(), vars.end(), v) || s.occurs_free(v, root)) return t;
    auto bound = n.bound_vars();
    vars.insert(vars.end(), bound.begin(), bound.end());
    return pull_quantifiers(s, n.body(), positive, root, vars);
  }
  if (n.kind != Kind::App) return t;
  std::vector<TermId> kids = n.children;
  switch (n.op) {
    case Op::Not: kids[0] = pull_quantifiers(s, kids[0], !positive, root, vars); break;
    case Op::And:
    case Op::Or:
      for (TermId& k : kids) k = pull_quantifiers(s, k, positive, root, vars);
      break;
    case Op::Implies:
      for (std::size_t i = 0; i < kids.size(); ++i)
        kids[i] = pull_quantifiers(s, kids[i], i + 1 == kids.size() ? positive : !positive, root,
                                   vars);
      break;
    default: return t;
  }
  return kids == n.children ? t : s.rebuild(t, kids);
}

// Instance of ∀vars.body under `args`; nullopt with `why` set on failure.
std::optional<TermId> instantiate(TermStore& s, const std::vector<TermId>& vars, TermId body,
                                  const std::vector<StepArg>& args, std::string& why) {
  Substitution sub;
  std::vector<bool> used(vars.size(), false);
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::size_t slot = vars.size();
    if (args[i].var) {
      const std::string& name = s.node(*args[i].var).name;
      for (std::size_t j = 0; j < vars.size(); ++j)
        if (!used[j] && s.node(vars[j]).name == name) {
          slot = j;
          break;
        }
    } else if (i < vars.size() && !used[i]) {
      slot = i;
    }
    if (slot == vars.size()) {
      why = "argument " + std::to_string(i + 1) + " names no quantified variable";
      return std::nullopt;
    }
    if (s.sort_of(args[i].term) != s.sort_of(vars[slot])) {
      why = "argument " + std::to_string(i + 1) + " has the wrong sort";
      return std::nullopt;
    }
    used[slot] = true;
    sub.mappings.emplace_back(vars[slot], args[i].term);
  }
  TermId inst = s.apply_subst(body, sub);
  std::vector<TermId> rest;
  for (std::size_t j = 0; j < vars.size(); ++j)
    if (!used[j]) rest.push_back(vars[j]);
  return rest.empty() ? inst : s.binder(BinderKind::Forall, rest, inst);
}

}  // namespace

Outcome check_forall_inst(TermStore& s, const Clause& clause, const std::vector<StepArg>& args) {
  std::vector<TermId> lits = clause;
  if (lits.size() == 1) {
    auto [core, neg] = polarize(s, lits[0]);
    if (!neg && s.is_app(core, Op::Or) && s.node(core).children.size() == 2)
      lits = s.node(core).children;
  }
  if (lits.size() != 2) return Outcome::invalid("forall_inst expects two literals");
  for (const StepArg& a : args)
    if (!s.free_vars(a.term).empty())
      return Outcome::invalid("instantiation term " + term_to_string(s, a.term) + " is not closed");
  std::string why = "the first literal is not a negated universal formula";
  for (int pass = 0; pass < 2; ++pass) {
    auto [core, neg] = polarize(s, lits[pass]);
    TermId psi = lits[1 - pass];
    const TermNode& q = s.node(core);
    if (!neg || q.kind != Kind::Binder || q.binder != BinderKind::Forall) continue;
    std::vector<TermId> vars = q.bound_vars();
    TermId body = q.body();
    if (auto inst = instantiate(s, vars, body, args, why); inst && same_term(s, *inst, psi))
      return Outcome::valid();
    std::vector<TermId> pulled = vars;
    TermId matrix = pull_quantifiers(s, body, true, body, pulled);
    if (pulled.size() > vars.size())
      if (auto inst = instantiate(s, pulled, matrix, args, why); inst && same_term(s, *inst, psi))
        return Outcome::valid();
    if (why.empty() || why.rfind("the first", 0) == 0)
      why = "the instance does not match " + term_to_string(s, psi);
  }
  return Outcome::invalid(why);
}

namespace detail {

namespace {

struct ClosedRegion {
  const Region* region = nullptr;
  std::optional<std::size_t> last;
};

ClosedRegion closed_region(const StepContext& ctx) {
  int r = ctx.dag.closes[ctx.command];
  if (r < 0) return {};
  return {&ctx.dag.regions[r], last_inner_command(ctx.dag, r)};
}

std::optional<TermId> mapped_value(const Region& r, TermId var) {
  for (const ContextEntry& e : r.context)
    if (e.var == var && e.value) return e.value;
  return std::nullopt;
}

// The last inner step must prove (= a b) with a ≅ lhs and b ≅ rhs.
Outcome inner_equality(StepContext& ctx, const ClosedRegion& cr, TermId lhs, TermId rhs,
                       const Substitution* sigma = nullptr) {
  if (!cr.last) return Outcome::invalid("the subproof is empty");
  Clause c = ctx.dag.conclusion(*cr.last);
  if (c.size() != 1) return Outcome::invalid("the last inner step must be a unit equality");
  auto eq = positive_equality(ctx.store, c[0]);
  if (!eq) return Outcome::invalid("the last inner step must be an equality");
  auto matches = [&](TermId inner, TermId outer) {
    if (same_term(ctx.store, inner, outer)) return true;
    if (!sigma) return false;
    return same_term(ctx.store, ctx.store.apply_subst(inner, *sigma), outer) ||
           same_term(ctx.store, inner, ctx.store.apply_subst(outer, *sigma));
  };
  if ((matches(eq->first, lhs) && same_term(ctx.store, eq->second, rhs)) ||
      (matches(eq->second, lhs) && same_term(ctx.store, eq->first, rhs)))
    return Outcome::valid();
  return Outcome::invalid("the last inner step " + ctx.dag.label(*cr.last) +
                          " does not prove the equality of the bodies");
}

}  // namespace

Outcome check_bind(StepContext& ctx) {
  TermStore& s = ctx.store;
  ClosedRegion cr = closed_region(ctx);
  if (!cr.region) return Outcome::invalid("bind must close a subproof");
  if (ctx.step.clause.size() != 1) return Outcome::invalid("bind expects one literal");
  auto eq = positive_equality(s, ctx.step.clause[0]);
  if (!eq) return Outcome::invalid("bind expects an equality");
  const TermNode l = s.node(eq->first), r = s.node(eq->second);
  if (l.kind != Kind::Binder || r.kind != Kind::Binder || l.binder != r.binder ||
      l.children.size() != r.children.size())
    return Outcome::invalid("both sides must be binders of the same kind and arity");
  auto xs = l.bound_vars(), ys = r.bound_vars();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] == ys[i]) continue;
    auto v = mapped_value(*cr.region, xs[i]);
    if (!v || *v != ys[i])
      return Outcome::invalid("the context does not rename " + s.node(xs[i]).name + " to " +
                              s.node(ys[i]).name);
  }
  return inner_equality(ctx, cr, l.body(), r.body());
}

Outcome check_sko(StepContext& ctx, bool existential) {
  TermStore& s = ctx.store;
  const char* rule = existential ? "sko_ex" : "sko_forall";
  ClosedRegion cr = closed_region(ctx);
  if (!cr.region) return Outcome::invalid(std::string(rule) + " must close a subproof");
  if (ctx.step.clause.size() != 1) return Outcome::invalid(std::string(rule) + " expects one literal");
  auto eq = positive_equality(s, ctx.step.clause[0]);
  if (!eq) return Outcome::invalid(std::string(rule) + " expects an equality");
  const TermNode q = s.node(eq->first);
  BinderKind kind = existential ? BinderKind::Exists : BinderKind::Forall;
  if (q.kind != Kind::Binder || q.binder != kind)
    return Outcome::invalid(std::string("the left side must be ") +
                            (existential ? "an existential" : "a universal") + " formula");
  auto xs = q.bound_vars();
  TermId phi = q.body();
  Substitution earlier;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::vector<TermId> rest(xs.begin() + i + 1, xs.end());
    TermId body = s.apply_subst(phi, earlier);
    TermId inner = rest.empty() ? body : s.binder(kind, rest, body);
    TermId expected = s.binder(BinderKind::Choice, {xs[i]}, existential ? inner : s.mk_not(inner));
    auto v = mapped_value(*cr.region, xs[i]);
    if (!v || !same_term(s, *v, expected))
      return Outcome::invalid("the context does not map " + s.node(xs[i]).name +
                              " to the expected choice term " + term_to_string(s, expected));
    earlier.mappings.emplace_back(xs[i], *v);
  }
  return inner_equality(ctx, cr, phi, eq->second, &earlier);
}

Outcome check_let(StepContext& ctx) {
  TermStore& s = ctx.store;
  ClosedRegion cr = closed_region(ctx);
  if (!cr.region) return Outcome::invalid("let must close a subproof");
  if (ctx.step.clause.size() != 1) return Outcome::invalid("let expects one literal");
  auto eq = positive_equality(s, ctx.step.clause[0]);
  if (!eq) return Outcome::invalid("let expects an equality");
  Substitution local = sigma_of(s, cr.region->context);
  return inner_equality(ctx, cr, eq->first, eq->second, &local);
}

Outcome check_subproof(StepContext& ctx) {
  TermStore& s = ctx.store;
  ClosedRegion cr = closed_region(ctx);
  if (!cr.region) return Outcome::invalid("subproof must close a subproof");
  if (!cr.last) return Outcome::invalid("the subproof is empty");
  TermId falsum = s.boolean(false);
  std::set<LiteralKey> expected;
  for (std::size_t a : cr.region->assumes)
    expected.insert(literal_key(s, s.mk_not(ctx.dag.assume(a)->term)));
  for (TermId lit : ctx.dag.conclusion(*cr.last))
    if (lit != falsum) expected.insert(literal_key(s, lit));
  std::set<LiteralKey> actual;
  for (TermId lit : ctx.step.clause)
    if (lit != falsum) actual.insert(literal_key(s, lit));
  if (expected == actual) return Outcome::valid();
  return Outcome::invalid("the clause must negate the assumptions and repeat the conclusion of " +
                          ctx.dag.label(*cr.last));
}

}  // namespace detail

}  // namespace vtcheck
