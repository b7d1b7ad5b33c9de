#include "vtcheck/printer.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace vtcheck {

namespace {

// Every symbol a fresh name must avoid.
std::unordered_set<std::string> taken_symbols(const TermStore& store, const ProofDag& dag) {
  std::unordered_set<std::string> taken;
  for (std::uint32_t i = 0; i < store.size(); ++i) {
    const TermNode& n = store.node(TermId{i});
    if (!n.name.empty()) taken.insert(n.name);
  }
  for (std::size_t i = 0; i < dag.commands.size(); ++i) {
    taken.insert(dag.label(i));
    if (const auto* d = std::get_if<DefineFunCmd>(&dag.commands[i].body)) taken.insert(d->name);
  }
  return taken;
}

std::string fresh_name(const std::string& prefix, std::size_t& counter,
                       const std::unordered_set<std::string>& taken) {
  for (;;) {
    std::string name = prefix + std::to_string(++counter);
    if (!taken.count(name)) return name;
  }
}

// Terms printed for a command, :args and anchor values included.
template <typename F>
void for_each_root(const ProofCommand& cmd, F&& f) {
  if (const auto* a = std::get_if<AssumeCmd>(&cmd.body)) {
    f(a->term);
  } else if (const auto* s = std::get_if<StepCmd>(&cmd.body)) {
    for (TermId t : s->clause) f(t);
    for (const StepArg& a : s->args) f(a.term);
  } else if (const auto* an = std::get_if<AnchorCmd>(&cmd.body)) {
    for (const ContextEntry& e : an->context)
      if (e.value) f(*e.value);
  }
}

bool closed_choice(TermStore& s, TermId t) {
  const TermNode& n = s.node(t);
  return n.kind == Kind::Binder && n.binder == BinderKind::Choice && s.free_vars(t).empty();
}

class Marker {
 public:
  Marker(TermStore& store, bool opaque_choice, const std::unordered_set<std::string>& taken)
      : s_(store), opaque_choice_(opaque_choice), taken_(taken) {}

  void visit_root(TermId t) { visit(t); }

  NamingPlan take() { return std::move(plan_); }

 private:
  struct State {
    unsigned visits = 0;
    bool done = false;  // second occurrence seen
  };

  // First visit marks and descends, second visit names; a marked term is
  // never descended into again, so every DAG edge is walked once.
  void visit(TermId t) {
    const TermNode& n = s_.node(t);
    if (n.children.empty()) return;
    auto [it, fresh] = state_.try_emplace(t);
    State& st = it->second;
    if (st.done) return;
    plan_.max_visits = std::max<std::size_t>(plan_.max_visits, ++st.visits);
    if (!fresh) {
      st.done = true;
      bool opaque = opaque_choice_ && closed_choice(s_, t);
      if (!opaque && s_.free_vars(t).empty())
        plan_.assignment.emplace(t, fresh_name("@p_", counter_, taken_));
      return;
    }
    if (opaque_choice_ && closed_choice(s_, t)) return;
    // Binder variable lists are declarations, not occurrences.
    if (n.kind == Kind::Binder) {
      visit(n.body());
      return;
    }
    for (TermId k : n.children) visit(k);
  }

  TermStore& s_;
  bool opaque_choice_;
  const std::unordered_set<std::string>& taken_;
  std::unordered_map<TermId, State, TermIdHash> state_;
  NamingPlan plan_;
  std::size_t counter_ = 0;
};

class Printer {
 public:
  Printer(TermStore& store, const ProofDag& dag, const PrintOptions& options)
      : s_(store), dag_(dag), opt_(options), taken_(taken_symbols(store, dag)) {
    if (opt_.share) choose_names(mark_shared(store, dag, opt_.define_skolems));
  }

  std::string run() {
    for (const ProofCommand& cmd : dag_.commands) {
      if (opt_.define_skolems) hoist_skolems(cmd);
      command(cmd);
      out_ += '\n';
    }
    return std::move(out_);
  }

 private:
  // Keeps a name only if it shortens the output: a kept term occurs at
  // least twice, so one reference must save more than the annotation costs.
  // Terms are decided children first (interning order).
  void choose_names(const NamingPlan& plan) {
    for (const auto& [t, name] : plan.assignment) {
      std::size_t len = measure(t);
      if (len > 2 * name.size() + 12) names_.emplace(t, name);
    }
  }

  std::size_t measure(TermId t) {
    if (auto it = names_.find(t); it != names_.end()) return it->second.size();
    if (auto it = lengths_.find(t); it != lengths_.end()) return it->second;
    // Skolem names are not chosen yet; "@sk_1" is the shortest possible.
    if (opt_.define_skolems && closed_choice(s_, t)) return 5;
    std::string text;
    shallow(t, text, [&](TermId c, std::string& o) { o.append(measure(c), '.'); });
    lengths_.emplace(t, text.size());
    return text.size();
  }

  void hoist_skolems(const ProofCommand& cmd) {
    std::vector<TermId> found;
    std::unordered_set<TermId, TermIdHash> seen;
    std::function<void(TermId)> collect = [&](TermId t) {
      if (!seen.insert(t).second) return;
      const TermNode& n = s_.node(t);
      if (n.kind == Kind::Binder) collect(n.body());
      else
        for (TermId c : n.children) collect(c);
      if (closed_choice(s_, t) && !skolems_.count(t)) found.push_back(t);
    };
    for_each_root(cmd, collect);
    for (TermId t : found) {
      std::string name = fresh_name("@sk_", skolem_counter_, taken_);
      out_ += "(define-fun " + name + " () " + s_.sort(s_.sort_of(t)).name + " ";
      shallow(t, out_, [&](TermId c, std::string& o) { plain(c, o); });
      out_ += ")\n";
      skolems_.emplace(t, name);
    }
  }

  // Prints the head of `t` and delegates each child to `child`.
  template <typename Child>
  void shallow(TermId t, std::string& o, Child&& child) {
    const TermNode& n = s_.node(t);
    switch (n.kind) {
      case Kind::Var:
      case Kind::Const: o += term_to_string(s_, t); return;
      case Kind::App: {
        std::string head = n.op == Op::Uf ? quote_symbol(n.name) : std::string(op_symbol(n.op));
        if (n.children.empty()) {
          o += head;
          return;
        }
        o += "(" + head;
        for (TermId c : n.children) {
          o += ' ';
          child(c, o);
        }
        o += ')';
        return;
      }
      case Kind::Binder: {
        o += "(" + std::string(binder_symbol(n.binder)) + " (";
        auto vars = n.bound_vars();
        for (std::size_t i = 0; i < vars.size(); ++i) {
          if (i) o += ' ';
          o += sorted_var(vars[i]);
        }
        o += ") ";
        child(n.body(), o);
        o += ')';
        return;
      }
    }
  }

  std::string sorted_var(TermId v) {
    const TermNode& n = s_.node(v);
    return "(" + quote_symbol(n.name) + " " + s_.sort(n.sort).name + ")";
  }

  // Skolem references only, no sharing.
  void plain(TermId t, std::string& o) {
    if (auto it = skolems_.find(t); it != skolems_.end()) {
      o += it->second;
      return;
    }
    shallow(t, o, [&](TermId c, std::string& oo) { plain(c, oo); });
  }

  void term(TermId t, std::string& o) {
    if (auto it = skolems_.find(t); it != skolems_.end()) {
      o += it->second;
      return;
    }
    if (auto it = names_.find(t); it != names_.end()) {
      if (!defined_.insert(t).second) {
        o += it->second;
        return;
      }
      o += "(! ";
      shallow(t, o, [&](TermId c, std::string& oo) { term(c, oo); });
      o += " :named " + it->second + ")";
      return;
    }
    shallow(t, o, [&](TermId c, std::string& oo) { term(c, oo); });
  }

  static std::string symbols(const std::vector<std::string>& xs) {
    std::string o = "(";
    for (std::size_t i = 0; i < xs.size(); ++i) o += (i ? " " : "") + quote_symbol(xs[i]);
    return o + ")";
  }

  void command(const ProofCommand& cmd) {
    if (const auto* a = std::get_if<AssumeCmd>(&cmd.body)) {
      out_ += "(assume " + quote_symbol(a->index) + " ";
      term(a->term, out_);
      out_ += ")";
    } else if (const auto* st = std::get_if<StepCmd>(&cmd.body)) {
      out_ += "(step " + quote_symbol(st->index) + " (cl";
      for (TermId l : st->clause) {
        out_ += ' ';
        term(l, out_);
      }
      out_ += ") :rule " + quote_symbol(st->rule);
      if (!st->premises.empty()) out_ += " :premises " + symbols(st->premises);
      if (!st->args.empty()) {
        out_ += " :args (";
        for (std::size_t i = 0; i < st->args.size(); ++i) {
          if (i) out_ += ' ';
          const StepArg& arg = st->args[i];
          if (arg.var) out_ += "(:= " + quote_symbol(s_.node(*arg.var).name) + " ";
          term(arg.term, out_);
          if (arg.var) out_ += ")";
        }
        out_ += ")";
      }
      if (!st->discharge.empty()) out_ += " :discharge " + symbols(st->discharge);
      out_ += ")";
    } else if (const auto* an = std::get_if<AnchorCmd>(&cmd.body)) {
      out_ += "(anchor :step " + quote_symbol(an->target);
      if (!an->context.empty()) {
        out_ += " :args (";
        for (std::size_t i = 0; i < an->context.size(); ++i) {
          if (i) out_ += ' ';
          const ContextEntry& e = an->context[i];
          if (e.value) {
            out_ += "(:= " + sorted_var(e.var) + " ";
            term(*e.value, out_);
            out_ += ")";
          } else {
            out_ += sorted_var(e.var);
          }
        }
        out_ += ")";
      }
      out_ += ")";
    } else if (const auto* d = std::get_if<DefineFunCmd>(&cmd.body)) {
      out_ += "(define-fun " + quote_symbol(d->name) + " (";
      for (std::size_t i = 0; i < d->params.size(); ++i) {
        if (i) out_ += ' ';
        out_ += sorted_var(d->params[i]);
      }
      out_ += ") " + s_.sort(d->result).name + " " + term_to_string(s_, d->body) + ")";
    }
  }

  TermStore& s_;
  const ProofDag& dag_;
  PrintOptions opt_;
  std::unordered_set<std::string> taken_;
  std::map<TermId, std::string> names_;
  std::unordered_map<TermId, std::size_t, TermIdHash> lengths_;
  std::unordered_set<TermId, TermIdHash> defined_;
  std::unordered_map<TermId, std::string, TermIdHash> skolems_;
  std::size_t skolem_counter_ = 0;
  std::string out_;
};

}  // namespace

NamingPlan mark_shared(TermStore& store, const ProofDag& dag, bool opaque_choice) {
  auto taken = taken_symbols(store, dag);
  Marker marker(store, opaque_choice, taken);
  for (const ProofCommand& cmd : dag.commands)
    for_each_root(cmd, [&](TermId t) { marker.visit_root(t); });
  return marker.take();
}

std::string print_proof(TermStore& store, const ProofDag& dag, const PrintOptions& options) {
  return Printer(store, dag, options).run();
}

}  // namespace vtcheck
