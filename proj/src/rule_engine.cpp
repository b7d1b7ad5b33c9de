#include "vtcheck/rule_engine.hpp"

#include <algorithm>

#include "rules.hpp"
#include "vtcheck/linarith.hpp"

namespace vtcheck {

namespace detail {

Polarized polarize(const TermStore& store, TermId lit) {
  auto [core, count] = store.strip_negations(lit);
  return {core, count % 2 == 1};
}

std::vector<LiteralKey> keys_of(TermStore& store, const Clause& clause) {
  std::vector<LiteralKey> out;
  for (TermId lit : clause) {
    LiteralKey k = literal_key(store, lit);
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  }
  return out;
}

bool same_clause(TermStore& store, const Clause& expected, const Clause& actual, bool exact_order) {
  auto e = keys_of(store, expected), a = keys_of(store, actual);
  if (exact_order) return e == a;
  std::sort(e.begin(), e.end());
  std::sort(a.begin(), a.end());
  return e == a;
}

bool same_term(TermStore& store, TermId a, TermId b) {
  return a == b || store.canonical(a) == store.canonical(b);
}

std::optional<std::pair<TermId, TermId>> positive_equality(TermStore& store, TermId lit) {
  auto [core, neg] = polarize(store, lit);
  const TermNode& n = store.node(core);
  if (neg || n.kind != Kind::App || n.op != Op::Eq || n.children.size() != 2) return std::nullopt;
  return std::make_pair(n.children[0], n.children[1]);
}

std::optional<std::size_t> last_inner_command(const ProofDag& dag, int region) {
  const auto& members = dag.regions[region].members;
  for (auto it = members.rbegin(); it != members.rend(); ++it)
    if (dag.region_of[*it] == region && (dag.step(*it) || dag.assume(*it))) return *it;
  return std::nullopt;
}

}  // namespace detail

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Valid: return "valid";
    case Verdict::Invalid: return "invalid";
    case Verdict::Unchecked: return "unchecked";
  }
  return "?";
}

std::size_t CheckReport::count(Verdict v) const {
  return static_cast<std::size_t>(
      std::count_if(steps.begin(), steps.end(), [&](const StepResult& r) { return r.verdict == v; }));
}

const std::map<std::string, CheckerKind>& rule_table() {
  static const std::map<std::string, CheckerKind> table = [] {
    std::map<std::string, CheckerKind> t;
    using K = CheckerKind;
    for (const char* r :
         {"true", "false", "and_pos", "and_neg", "and_neq", "or_pos", "or_neg", "implies_pos", "implies_neg1",
          "implies_neg2", "equiv_pos1", "equiv_pos2", "equiv_neg1", "equiv_neg2", "ite_pos1",
          "ite_pos2", "ite_neg1", "ite_neg2", "xor_pos1", "xor_pos2", "xor_neg1", "xor_neg2",
          "ite_intro", "distinct_elim", "eq_reflexive", "eq_transitive", "eq_congruent",
          "eq_congruent_pred"})
      t[r] = K::TautologyTemplate;
    for (const char* r :
         {"implies", "not_implies1", "not_implies2", "equiv1", "equiv2", "not_equiv1", "not_equiv2",
          "and", "not_or", "or", "not_and", "xor1", "xor2", "not_xor1", "not_xor2", "ite1", "ite2",
          "not_ite1", "not_ite2"})
      t[r] = K::Deduction;
    for (const char* r : {"refl", "cong", "trans"}) t[r] = K::CtxEquality;
    for (const char* r : {"resolution", "th_resolution", "contraction", "reordering",
                          "duplicated_literals"})
      t[r] = K::Resolution;
    t["forall_inst"] = K::ForallInst;
    t["sko_ex"] = K::Sko;
    t["sko_forall"] = K::Sko;
    t["bind"] = K::Bind;
    t["let"] = K::Let;
    t["subproof"] = K::SubproofDischarge;
    for (const char* r :
         {"la_generic", "lia_generic", "la_disequality", "la_tautology", "la_totality", "la_rw_eq"})
      t[r] = K::LaRule;
    for (const char* r :
         {"bool_simplify", "connective_def", "and_simplify", "or_simplify", "not_simplify",
          "implies_simplify", "equiv_simplify", "qnt_rm_unused", "qnt_join", "qnt_simplify",
          "ac_simp", "tmp_ac_simp", "connective_equiv", "tmp_bfun_elim"})
      t[r] = K::BoolSimplify;
    for (const char* r : {"nla_generic", "tmp_skolemize", "hole"}) t[r] = K::Trusted;
    return t;
  }();
  return table;
}

namespace {

std::vector<ContextEntry> region_chain_context(const ProofDag& dag, int r) {
  std::vector<int> chain;
  for (; r >= 0; r = dag.regions[r].parent) chain.push_back(r);
  std::vector<ContextEntry> out;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const auto& ctx = dag.regions[*it].context;
    out.insert(out.end(), ctx.begin(), ctx.end());
  }
  return out;
}

Outcome from_la(const LaOutcome& o) {
  switch (o.kind) {
    case LaOutcome::Kind::Valid: return Outcome::valid();
    case LaOutcome::Kind::Invalid: return Outcome::invalid(o.reason);
    case LaOutcome::Kind::Unchecked: return Outcome::unchecked(o.reason);
  }
  return Outcome::unchecked(o.reason);
}

Outcome dispatch(detail::StepContext& ctx, CheckerKind kind) {
  TermStore& s = ctx.store;
  const StepCmd& step = ctx.step;
  switch (kind) {
    case CheckerKind::TautologyTemplate:
      if (!ctx.premises.empty()) return Outcome::invalid(step.rule + " takes no premises");
      return check_tautology_template(s, step.rule, step.clause);
    case CheckerKind::Deduction:
      if (ctx.premises.size() != 1) return Outcome::invalid(step.rule + " takes exactly one premise");
      return check_unary_deduction(s, step.rule, ctx.premises[0], step.clause, ctx.options.strict);
    case CheckerKind::CtxEquality:
      if (step.rule == "refl") return detail::check_refl(ctx);
      if (step.rule == "cong") return detail::check_cong(ctx);
      return detail::check_trans(ctx);
    case CheckerKind::Resolution:
      if (ctx.premises.empty()) return Outcome::invalid(step.rule + " needs premises");
      return check_resolution(s, ctx.premises, step.clause);
    case CheckerKind::ForallInst:
      if (!ctx.premises.empty()) return Outcome::invalid("forall_inst takes no premises");
      return check_forall_inst(s, step.clause, step.args);
    case CheckerKind::Sko: return detail::check_sko(ctx, step.rule == "sko_ex");
    case CheckerKind::Bind: return detail::check_bind(ctx);
    case CheckerKind::Let: return detail::check_let(ctx);
    case CheckerKind::SubproofDischarge: return detail::check_subproof(ctx);
    case CheckerKind::LaRule:
      if (!ctx.premises.empty()) return Outcome::invalid(step.rule + " takes no premises");
      return from_la(check_la_rule(s, step.rule, step.clause));
    case CheckerKind::BoolSimplify:
      if (!ctx.premises.empty()) return Outcome::invalid(step.rule + " takes no premises");
      return check_bool_simplify(s, step.rule, step.clause, ctx.options.atom_bound);
    case CheckerKind::Trusted: return Outcome::unchecked("rule " + step.rule + " is trusted");
  }
  return Outcome::unchecked("unknown rule " + step.rule);
}

bool context_rule(CheckerKind k) {
  return k == CheckerKind::CtxEquality || k == CheckerKind::Bind || k == CheckerKind::Sko ||
         k == CheckerKind::Let;
}

}  // namespace

CheckReport check_proof(TermStore& store, const ProofDag& dag, const CheckOptions& options) {
  CheckReport report;
  report.diagnostics = validate_structure(dag);
  const auto& table = rule_table();
  for (std::size_t i = 0; i < dag.commands.size(); ++i) {
    if (const AssumeCmd* a = dag.assume(i)) {
      report.steps.push_back({i, a->index, "assume", Verdict::Valid, "", {}});
      continue;
    }
    const StepCmd* step = dag.step(i);
    if (!step) continue;
    auto start = std::chrono::steady_clock::now();
    StepResult result{i, step->index, step->rule, Verdict::Valid, "", {}};
    auto entry = table.find(step->rule);
    Outcome out;
    if (options.skip_rules.count(step->rule)) {
      out = Outcome::unchecked("rule " + step->rule + " skipped by request");
    } else if (entry == table.end()) {
      out = Outcome::unchecked("unknown rule " + step->rule);
    } else {
      int closed = dag.closes[i];
      std::vector<ContextEntry> context =
          closed >= 0 ? region_chain_context(dag, closed) : context_at(dag, i);
      detail::StepContext ctx{store, dag, i, *step, options, {}, context, {}};
      for (std::size_t p : dag.premises[i]) ctx.premises.push_back(dag.conclusion(p));
      try {
        ctx.sigma = sigma_of(store, ctx.context);
        out = dispatch(ctx, entry->second);
      } catch (const Error& e) {
        out = Outcome::invalid(e.what());
      }
      if (options.strict) {
        if (!step->args.empty() && entry->second != CheckerKind::ForallInst &&
            entry->second != CheckerKind::LaRule)
          report.diagnostics.push_back({Severity::Warning, "unused-args", step->index, step->rule,
                                        "arguments of rule " + step->rule + " are ignored"});
        if (!context_at(dag, i).empty() && !context_rule(entry->second) &&
            step->rule.rfind("eq_", 0) != 0)
          report.diagnostics.push_back(
              {Severity::Warning, "context-rule", step->index, step->rule,
               "rule " + step->rule + " is used inside a non-empty context"});
      }
    }
    result.verdict = out.verdict;
    if (out.verdict == Verdict::Invalid)
      result.reason = "step " + step->index + " (" + step->rule + "): " + out.reason;
    else
      result.reason = out.reason;
    result.elapsed = std::chrono::steady_clock::now() - start;
    report.steps.push_back(std::move(result));
  }
  bool errors = std::any_of(report.diagnostics.begin(), report.diagnostics.end(),
                            [](const Diagnostic& d) { return d.severity == Severity::Error; });
  bool steps_ok = std::all_of(report.steps.begin(), report.steps.end(), [&](const StepResult& r) {
    return r.verdict == Verdict::Valid ||
           (r.verdict == Verdict::Unchecked && options.allow_unchecked);
  });
  report.valid = !errors && steps_ok;
  return report;
}

}  // namespace vtcheck
