#include "vtcheck/driver.hpp"

#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace vtcheck {

namespace {

using nlohmann::json;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return ss.str();
}

void emit_error(std::ostream& out, bool as_json, const std::string& code, const std::string& message,
                std::optional<Position> pos = std::nullopt,
                std::optional<std::size_t> command = std::nullopt) {
  if (as_json) {
    json j{{"severity", "error"}, {"code", code}, {"message", message}};
    if (pos) {
      j["line"] = pos->line;
      j["column"] = pos->column;
    }
    if (command) j["command"] = *command;
    out << j.dump() << '\n';
    return;
  }
  out << "error[" << code << "]";
  if (pos) out << " " << to_string(*pos);
  out << ": " << message << '\n';
}

json diagnostic_json(const Diagnostic& d) {
  json j{{"severity", d.severity == Severity::Error ? "error" : "warning"},
         {"code", d.code},
         {"message", d.message}};
  if (d.step) j["step"] = *d.step;
  if (d.rule) j["rule"] = *d.rule;
  return j;
}

void emit_diagnostic(std::ostream& out, bool as_json, const Diagnostic& d) {
  if (as_json) {
    out << diagnostic_json(d).dump() << '\n';
    return;
  }
  out << (d.severity == Severity::Error ? "error" : "warning") << "[" << d.code << "]";
  if (d.step) out << " step " << *d.step;
  if (d.rule) out << " (" << *d.rule << ")";
  out << ": " << d.message << '\n';
}

struct Loaded {
  std::unique_ptr<TermStore> store = std::make_unique<TermStore>();
  ProofDag dag;
};

// Runs `body` on the loaded proof; loading failures exit with kExitError.
template <typename Body>
int with_proof(std::string_view text, const DriverOptions& options, std::ostream& out, Body&& body) {
  try {
    std::optional<Declarations> decls;
    if (options.problem) {
      auto problem = read_file(*options.problem);
      if (!problem) {
        emit_error(out, options.json, "io-error", "cannot read problem file " + *options.problem);
        return kExitError;
      }
      decls = parse_problem(*problem);
    }
    Loaded loaded;
    auto commands = load_proof(text, *loaded.store, decls ? &*decls : nullptr);
    loaded.dag = build_dag(std::move(commands));
    return body(*loaded.store, loaded.dag);
  } catch (const Error& e) {
    emit_error(out, options.json, e.code(), e.bare_message(), e.position(), e.command());
  } catch (const std::exception& e) {
    emit_error(out, options.json, "internal-error", e.what());
  }
  return kExitError;
}

template <typename F>
int from_file(const std::string& path, const DriverOptions& options, std::ostream& out, F&& f) {
  auto text = read_file(path);
  if (!text) {
    emit_error(out, options.json, "io-error", "cannot read " + path);
    return kExitError;
  }
  return f(*text, options, out);
}

}  // namespace

ProofStats compute_stats(TermStore& store, const ProofDag& dag) {
  ProofStats st;
  st.max_depth = dag.max_depth();
  std::unordered_set<TermId, TermIdHash> seen;
  std::unordered_map<TermId, double, TermIdHash> tree;
  std::function<double(TermId)> visit = [&](TermId t) {
    if (auto it = tree.find(t); it != tree.end()) return it->second;
    seen.insert(t);
    double size = 1;
    for (TermId c : store.node(t).children) size += visit(c);
    tree.emplace(t, size);
    return size;
  };
  auto root = [&](TermId t) { st.tree_nodes += visit(t); };
  for (std::size_t i = 0; i < dag.commands.size(); ++i) {
    const auto& body = dag.commands[i].body;
    if (const auto* a = std::get_if<AssumeCmd>(&body)) {
      ++st.steps;
      ++st.rules["assume"];
      root(a->term);
    } else if (const auto* s = std::get_if<StepCmd>(&body)) {
      ++st.steps;
      ++st.rules[s->rule];
      for (TermId t : s->clause) root(t);
      for (const StepArg& arg : s->args) root(arg.term);
    } else if (const auto* an = std::get_if<AnchorCmd>(&body)) {
      for (const ContextEntry& e : an->context) {
        root(e.var);
        if (e.value) root(*e.value);
      }
    }
  }
  st.dag_nodes = seen.size();
  st.sharing_ratio = st.dag_nodes ? st.tree_nodes / static_cast<double>(st.dag_nodes) : 1.0;
  return st;
}

int check_text(std::string_view proof, const DriverOptions& options, std::ostream& out) {
  return with_proof(proof, options, out, [&](TermStore& store, const ProofDag& dag) {
    CheckReport report = check_proof(store, dag, options.check);
    for (const Diagnostic& d : report.diagnostics) emit_diagnostic(out, options.json, d);
    for (const StepResult& r : report.steps) {
      if (r.verdict == Verdict::Valid) continue;
      Diagnostic d;
      bool invalid = r.verdict == Verdict::Invalid;
      d.severity = invalid || !options.check.allow_unchecked ? Severity::Error : Severity::Warning;
      d.code = invalid ? "invalid-step" : "unchecked-step";
      d.step = r.index;
      d.rule = r.rule;
      d.message = r.reason;
      emit_diagnostic(out, options.json, d);
    }
    int code = report.valid ? kExitValid : kExitInvalid;
    std::size_t valid = report.count(Verdict::Valid), invalid = report.count(Verdict::Invalid),
                unchecked = report.count(Verdict::Unchecked);
    std::string result = report.valid ? "valid" : invalid ? "invalid" : unchecked ? "unchecked"
                                                                                 : "rejected";
    if (options.json) {
      out << json{{"kind", "summary"},   {"result", result},       {"steps", report.steps.size()},
                  {"valid", valid},      {"invalid", invalid},     {"unchecked", unchecked},
                  {"exit", code}}
                 .dump()
          << '\n';
    } else {
      out << "result: " << result << " (" << report.steps.size() << " steps, " << valid
          << " valid, " << invalid << " invalid, " << unchecked << " unchecked)\n";
    }
    return code;
  });
}

int print_text(std::string_view proof, const DriverOptions& options, std::ostream& out) {
  return with_proof(proof, options, out, [&](TermStore& store, const ProofDag& dag) {
    out << print_proof(store, dag, options.print);
    return kExitValid;
  });
}

int stats_text(std::string_view proof, const DriverOptions& options, std::ostream& out) {
  return with_proof(proof, options, out, [&](TermStore& store, const ProofDag& dag) {
    ProofStats st = compute_stats(store, dag);
    if (options.json) {
      out << json{{"kind", "stats"},
                  {"steps", st.steps},
                  {"rules", st.rules},
                  {"max_depth", st.max_depth},
                  {"dag_nodes", st.dag_nodes},
                  {"tree_nodes", st.tree_nodes},
                  {"sharing_ratio", st.sharing_ratio}}
                 .dump()
          << '\n';
      return kExitValid;
    }
    out << "steps: " << st.steps << '\n'
        << "max subproof depth: " << st.max_depth << '\n'
        << "dag nodes: " << st.dag_nodes << '\n'
        << "tree nodes: " << std::setprecision(15) << st.tree_nodes << '\n'
        << "sharing ratio: " << std::fixed << std::setprecision(3) << st.sharing_ratio << '\n'
        << std::defaultfloat << "rules:\n";
    for (const auto& [rule, n] : st.rules) out << "  " << rule << ": " << n << '\n';
    return kExitValid;
  });
}

int cmd_check(const std::string& path, const DriverOptions& options, std::ostream& out) {
  return from_file(path, options, out, check_text);
}

int cmd_print(const std::string& path, const DriverOptions& options, std::ostream& out) {
  return from_file(path, options, out, print_text);
}

int cmd_stats(const std::string& path, const DriverOptions& options, std::ostream& out) {
  return from_file(path, options, out, stats_text);
}

}  // namespace vtcheck
