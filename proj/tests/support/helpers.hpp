#ifndef VTCHECK_TESTS_HELPERS_HPP
#define VTCHECK_TESTS_HELPERS_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "vtcheck/driver.hpp"

namespace vtcheck::testing {

// Signature used by hand-written snippets and by the fuzzer.
inline constexpr const char* kPrelude = R"(
(declare-sort U 0)
(declare-fun a () U)
(declare-fun b () U)
(declare-fun c () U)
(declare-fun d () U)
(declare-fun f (U) U)
(declare-fun g (U U) U)
(declare-fun p (U) Bool)
(declare-fun q (U) Bool)
(declare-fun P (U U) Bool)
(declare-fun r () Bool)
(declare-fun s () Bool)
(declare-fun p0 () Bool)
(declare-fun p1 () Bool)
(declare-fun p2 () Bool)
(declare-fun p3 () Bool)
(declare-fun p4 () Bool)
(declare-fun p5 () Bool)
(declare-fun x () Int)
(declare-fun y () Int)
(declare-fun z () Real)
(declare-fun w () Real)
)";

inline const Declarations& prelude() {
  static const Declarations decls = parse_problem(kPrelude);
  return decls;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string golden(const std::string& name) {
  return std::string(VTCHECK_GOLDEN_DIR) + "/" + name;
}

inline ProofDag load_dag(TermStore& store, std::string_view text, bool with_prelude = true) {
  return build_dag(load_proof(text, store, with_prelude ? &prelude() : nullptr));
}

// Clause of a single `(step t (cl ...) :rule hole)` over the prelude.
inline Clause clause(TermStore& store, const std::string& cl) {
  auto cmds = load_proof("(step t " + cl + " :rule hole)", store, &prelude());
  return std::get<StepCmd>(cmds.at(0).body).clause;
}

inline TermId term(TermStore& store, const std::string& t) {
  return clause(store, "(cl " + t + ")").at(0);
}

// A term of any sort, read through an equality with itself.
inline TermId any_term(TermStore& store, const std::string& t) {
  return store.node(term(store, "(= " + t + " " + t + ")")).children[0];
}

inline CheckReport check(TermStore& store, std::string_view text, const CheckOptions& opts = {}) {
  ProofDag dag = load_dag(store, text);
  return check_proof(store, dag, opts);
}

inline const StepResult& result_of(const CheckReport& report, const std::string& index) {
  for (const auto& r : report.steps)
    if (r.index == index) return r;
  throw std::out_of_range("no step " + index);
}

}  // namespace vtcheck::testing

#endif  // VTCHECK_TESTS_HELPERS_HPP
