#include "vtcheck/proof_graph.hpp"

#include <algorithm>

namespace vtcheck {

namespace {

// Rules whose step closes a region; outside one they are structurally wrong.
bool needs_region(const std::string& rule) {
  return rule == "bind" || rule == "sko_ex" || rule == "sko_forall" || rule == "let" ||
         rule == "subproof";
}

}  // namespace

std::string ProofDag::label(std::size_t i) const {
  if (const auto* s = step(i)) return s->index;
  if (const auto* a = assume(i)) return a->index;
  return "";
}

Clause ProofDag::conclusion(std::size_t i) const {
  if (const auto* s = step(i)) return s->clause;
  if (const auto* a = assume(i)) return {a->term};
  return {};
}

bool ProofDag::within(int inner, int outer) const {
  for (int r = inner;; r = regions[r].parent) {
    if (r == outer) return true;
    if (r < 0) return false;
  }
}

int ProofDag::max_depth() const {
  int d = 0;
  for (const auto& r : regions) d = std::max(d, r.depth);
  return d;
}

ProofDag build_dag(std::vector<ProofCommand> commands) {
  if (commands.empty()) throw StructureError("empty proof");
  ProofDag dag;
  dag.commands = std::move(commands);
  const std::size_t n = dag.commands.size();
  dag.region_of.assign(n, -1);
  dag.closes.assign(n, -1);
  dag.premises.resize(n);

  std::unordered_map<std::string, std::size_t> all;  // first definition
  for (std::size_t i = 0; i < n; ++i) {
    std::string l = dag.label(i);
    if (!l.empty()) all.emplace(l, i);
  }

  std::vector<int> open;
  std::vector<bool> step_since_open;  // per open region
  bool seen_step = false;
  auto top = [&] { return open.empty() ? -1 : open.back(); };

  for (std::size_t i = 0; i < n; ++i) {
    const ProofCommand& cmd = dag.commands[i];
    const std::size_t number = i + 1;
    if (const auto* a = std::get_if<AnchorCmd>(&cmd.body)) {
      Region r;
      r.kind = Region::Kind::Anchor;
      r.open = i;
      r.parent = top();
      r.depth = r.parent < 0 ? 1 : dag.regions[r.parent].depth + 1;
      r.context = a->context;
      dag.region_of[i] = top();
      dag.regions.push_back(std::move(r));
      open.push_back(static_cast<int>(dag.regions.size()) - 1);
      step_since_open.push_back(false);
      continue;
    }
    if (const auto* as = std::get_if<AssumeCmd>(&cmd.body)) {
      int t = top();
      bool joins = t >= 0 && !step_since_open.back();
      if (!joins && seen_step) {
        Region r;
        r.kind = Region::Kind::Lemma;
        r.open = i;
        r.parent = t;
        r.depth = t < 0 ? 1 : dag.regions[t].depth + 1;
        dag.regions.push_back(std::move(r));
        open.push_back(static_cast<int>(dag.regions.size()) - 1);
        step_since_open.push_back(false);
        t = top();
      }
      if (t >= 0) dag.regions[t].assumes.push_back(i);
      dag.region_of[i] = t;
      if (dag.index.count(as->index)) dag.duplicates.push_back(as->index);
      dag.index[as->index] = i;
      continue;
    }
    if (const auto* s = std::get_if<StepCmd>(&cmd.body)) {
      seen_step = true;
      int t = top();
      bool closes = false;
      if (t >= 0) {
        const Region& r = dag.regions[t];
        if (r.kind == Region::Kind::Anchor) {
          const auto& target = std::get<AnchorCmd>(dag.commands[r.open].body).target;
          closes = target == s->index;
        } else {
          closes = s->rule == "subproof";
        }
      }
      if (!closes) {
        for (std::size_t k = 0; k + 1 < open.size(); ++k) {
          const Region& r = dag.regions[open[k]];
          if (r.kind == Region::Kind::Anchor &&
              std::get<AnchorCmd>(dag.commands[r.open].body).target == s->index)
            throw StructureError("step " + s->index + " closes an anchor that is not innermost",
                                 cmd.pos, number);
        }
        if (needs_region(s->rule))
          throw StructureError("step " + s->index + " uses rule " + s->rule +
                                   " but closes no subproof",
                               cmd.pos, number);
      }
      // Premises.
      for (const auto& p : s->premises) {
        auto it = dag.index.find(p);
        if (it == dag.index.end()) {
          auto later = all.find(p);
          if (later != all.end())
            throw StructureError("step " + s->index + " references later step " + p, cmd.pos,
                                 number);
          throw StructureError("step " + s->index + " references unknown step " + p, cmd.pos,
                               number);
        }
        dag.premises[i].push_back(it->second);
      }
      if (closes) {
        dag.regions[t].close = i;
        dag.closes[i] = t;
        open.pop_back();
        step_since_open.pop_back();
      } else if (!step_since_open.empty()) {
        step_since_open.back() = true;
      }
      dag.region_of[i] = top();
      if (dag.index.count(s->index)) dag.duplicates.push_back(s->index);
      dag.index[s->index] = i;
      continue;
    }
    dag.region_of[i] = top();  // define-fun
  }
  for (int r : open) {
    const Region& reg = dag.regions[r];
    if (reg.kind == Region::Kind::Anchor) {
      const auto& target = std::get<AnchorCmd>(dag.commands[reg.open].body).target;
      throw StructureError("anchor for " + target + " is never closed",
                           dag.commands[reg.open].pos, reg.open + 1);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (int r = dag.region_of[i]; r >= 0; r = dag.regions[r].parent)
      dag.regions[r].members.push_back(i);
  return dag;
}

std::vector<Diagnostic> validate_structure(const ProofDag& dag) {
  std::vector<Diagnostic> out;
  const std::size_t n = dag.commands.size();
  for (std::size_t i = 0; i < n; ++i) {
    const StepCmd* s = dag.step(i);
    if (!s) continue;
    for (std::size_t j : dag.premises[i]) {
      int rj = dag.region_of[j];
      bool visible = dag.within(dag.region_of[i], rj) ||
                     (dag.closes[i] >= 0 && dag.within(dag.closes[i], rj));
      if (!visible)
        out.push_back({Severity::Error, "premise-escape", s->index, s->rule,
                       "premise " + dag.label(j) +
                           " lies inside a closed subproof; only the subproof's conclusion "
                           "is visible outside it"});
    }
  }
  {
    const std::size_t last = n - 1;
    const StepCmd* s = dag.step(last);
    if (!s || !s->clause.empty() || dag.region_of[last] != -1) {
      Diagnostic d{Severity::Error, "final-step", std::nullopt, std::nullopt,
                   "the proof must end with a step deriving the empty clause in the empty context"};
      if (s) {
        d.step = s->index;
        d.rule = s->rule;
      }
      out.push_back(std::move(d));
    }
  }
  for (const Region& r : dag.regions) {
    const StepCmd* closer = r.close ? dag.step(*r.close) : nullptr;
    bool by_subproof = closer && closer->rule == "subproof";
    for (std::size_t a : r.assumes) {
      // Without an explicit :discharge list the subproof step discharges every assumption.
      if (by_subproof && (closer->discharge.empty() ||
                          std::ranges::find(closer->discharge, dag.label(a)) != closer->discharge.end()))
        continue;
      out.push_back({Severity::Error, "undischarged-assume", dag.label(a), std::nullopt,
                     "assumption " + dag.label(a) + " is not discharged by a subproof step"});
    }
  }
  for (const auto& d : dag.duplicates)
    out.push_back({Severity::Error, "duplicate-index", d, std::nullopt,
                   "index " + d + " is used by more than one command"});
  return out;
}

std::vector<ContextEntry> context_at(const ProofDag& dag, std::size_t i) {
  std::vector<int> chain;
  for (int r = dag.region_of[i]; r >= 0; r = dag.regions[r].parent) chain.push_back(r);
  std::vector<ContextEntry> out;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const auto& ctx = dag.regions[*it].context;
    out.insert(out.end(), ctx.begin(), ctx.end());
  }
  return out;
}

Substitution sigma_of(TermStore& store, const std::vector<ContextEntry>& context) {
  Substitution s;
  for (const ContextEntry& e : context) {
    if (!e.value) {
      auto& m = s.mappings;
      m.erase(std::remove_if(m.begin(), m.end(), [&](const auto& p) { return p.first == e.var; }),
              m.end());
      m.emplace_back(e.var, e.var);
    } else {
      Substitution single;
      single.mappings.emplace_back(e.var, *e.value);
      s = compose(store, s, single);
    }
  }
  return s;
}

}  // namespace vtcheck
