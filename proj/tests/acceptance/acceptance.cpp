// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <unistd.h>

#include "support/fm_oracle.hpp"
#include "support/fuzz.hpp"
#include "support/helpers.hpp"
#include "support/prop_oracle.hpp"
#include "vtcheck/linarith.hpp"

using namespace vtcheck;
namespace vt = vtcheck::testing;

namespace {

// Tolerances and sizes.
constexpr auto kGoldenBudget = std::chrono::milliseconds(50);
constexpr int kGoldenRuns = 5;  // worst run counts
constexpr int kResolutionSets = 1000;
constexpr int kResolutionAtoms = 6;
constexpr int kResolutionClauses = 5;  // premises plus conclusion
constexpr int kFmSystems = 500;
constexpr int kFmCoef = 4;
constexpr int kFuzzProofs = 1000;
constexpr int kMutationInstances = 100;
constexpr int kMutationAttempts = 5000;  // per rule, for oracle-rejected mutants
constexpr int kTotalityInputs = 10000;

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << detail << std::endl;
  if (!ok) ++failures;
}

std::vector<ProofCommand> without_skolem_defines(std::vector<ProofCommand> cmds) {
  std::erase_if(cmds, [](const ProofCommand& c) {
    const auto* d = std::get_if<DefineFunCmd>(&c.body);
    return d && d->name.rfind("@sk_", 0) == 0;
  });
  return cmds;
}

// 1 -----------------------------------------------------------------------

void goldens() {
  bool ok = true;
  std::ostringstream detail;
  for (const char* name : {"skolem_forall.proof", "linear_arith.proof", "bind_rename.proof"}) {
    std::string text = vt::read_text(vt::golden(name));
    std::chrono::nanoseconds worst{0};
    bool valid = true;
    for (int run = 0; run < kGoldenRuns; ++run) {
      auto t0 = std::chrono::steady_clock::now();
      TermStore s;
      ProofDag dag = vt::load_dag(s, text, false);
      CheckReport r = check_proof(s, dag);
      auto dt = std::chrono::steady_clock::now() - t0;
      worst = std::max(worst, std::chrono::duration_cast<std::chrono::nanoseconds>(dt));
      valid = valid && r.valid;
    }
    bool fast = worst < kGoldenBudget;
    ok = ok && valid && fast;
    detail << name << " " << (valid ? "valid" : "NOT valid") << " in "
           << std::chrono::duration<double, std::milli>(worst).count() << " ms; ";
  }
  detail << "budget " << kGoldenBudget.count() << " ms";
  report(1, ok, detail.str());
}

// 2 -----------------------------------------------------------------------

std::vector<vt::Row> rows_of(const std::vector<LinearAtom>& sys, std::vector<TermId>& vars) {
  for (const auto& a : sys)
    for (const auto& [v, c] : a.coeffs)
      if (std::ranges::find(vars, v) == vars.end()) vars.push_back(v);
  std::vector<vt::Row> rows;
  for (const auto& a : sys) {
    vt::Row r;
    r.a.assign(vars.size(), 0);
    for (const auto& [v, c] : a.coeffs) r.a[std::ranges::find(vars, v) - vars.begin()] = c;
    r.k = a.constant;
    r.rel = a.rel == Rel::Lt ? vt::Rel3::Lt : a.rel == Rel::Eq ? vt::Rel3::Eq : vt::Rel3::Le;
    rows.push_back(r);
  }
  return rows;
}

bool certificates_verify(const FmResult& r) {
  if (r.status != FmStatus::Unsat || r.branches.empty()) return false;
  for (const auto& b : r.branches)
    if (!verify_certificate(b.system, b.certificate)) return false;
  return true;
}

void tightening() {
  TermStore s;
  auto decls = parse_problem("(declare-fun x () Int) (declare-fun y () Int) (declare-fun z () Int)");
  auto cmds = load_proof(
      "(step t1 (cl (not (<= 0 y)) (not (< (* 10 x) (+ 4 (* 14 z)))) (<= (* 10 x) (+ 15 (* 25 y))) "
      "(not (<= (+ (* 10 x) (* 10 z)) (+ 30 (* 25 y))))) :rule hole)",
      s, &decls);
  std::vector<LinearAtom> sys;
  for (TermId lit : std::get<StepCmd>(cmds[0].body).clause) sys.push_back(*atom_of_term(s, lit));

  FmResult tight = fm_decide(sys, true);
  FmResult loose = fm_decide(sys, false);
  bool unsat_tight = tight.status == FmStatus::Unsat && certificates_verify(tight);
  bool sat_loose = loose.status == FmStatus::Sat;

  std::vector<TermId> vars;
  auto rows = rows_of(sys, vars);
  bool witness = vt::find_witness(rows, vars.size()).has_value();
  bool farkas = vt::find_farkas_exact(rows, vars.size()).has_value();

  std::ostringstream detail;
  detail << "tighten=true " << (tight.status == FmStatus::Unsat ? "UNSAT" : "SAT")
         << (unsat_tight ? " (certificate verifies)" : "") << "; tighten=false "
         << (loose.status == FmStatus::Unsat ? "UNSAT" : "SAT");
  if (loose.status == FmStatus::Unsat)
    detail << (certificates_verify(loose) ? " (certificate verifies)" : " (certificate FAILS)");
  detail << "; rational oracle: " << (witness ? "witness found" : "no witness")
         << (farkas ? ", Farkas multipliers found" : "");
  if (!sat_loose && !witness) detail << " (system is infeasible over the rationals, expected SAT)";
  report(2, unsat_tight && sat_loose, detail.str());
}

// 3 -----------------------------------------------------------------------

void resolution() {
  std::mt19937 rng(20261015);
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  int disagreements = 0, entailed = 0;
  std::string first_bad;
  for (int round = 0; round < kResolutionSets; ++round) {
    TermStore s;
    int atoms = 1 + pick(kResolutionAtoms);
    using Lits = std::vector<std::pair<int, bool>>;
    auto random_clause = [&](int min_len, int max_len) {
      Lits c;
      for (int k = min_len + pick(max_len - min_len + 1); k > 0; --k) c.push_back({pick(atoms), pick(2) == 1});
      return c;
    };
    std::vector<Lits> premises;
    int n = 1 + pick(kResolutionClauses - 1);
    for (int i = 0; i < n; ++i) premises.push_back(random_clause(1, 3));
    Lits concl;
    if (pick(2)) {
      // Resolve the premises left to right where a pivot exists.
      concl = premises[0];
      for (int i = 1; i < n; ++i) {
        const Lits& c = premises[i];
        auto pivot = std::ranges::find_if(concl, [&](auto l) {
          return std::ranges::find(c, std::pair{l.first, !l.second}) != c.end();
        });
        if (pivot == concl.end()) continue;
        auto [atom, neg] = *pivot;
        Lits next;
        for (auto l : concl)
          if (l != std::pair{atom, neg}) next.push_back(l);
        for (auto l : c)
          if (l != std::pair{atom, !neg}) next.push_back(l);
        concl = next;
      }
      if (pick(4) == 0 && !concl.empty()) concl.erase(concl.begin() + pick(static_cast<int>(concl.size())));
    } else {
      concl = random_clause(0, 4);
    }
    auto text = [](const Lits& c) {
      std::string out = "(cl";
      for (auto [a, neg] : c) out += neg ? " (not p" + std::to_string(a) + ")" : " p" + std::to_string(a);
      return out + ")";
    };
    std::vector<Clause> ps;
    for (const auto& p : premises) ps.push_back(vt::clause(s, text(p)));
    Clause c = vt::clause(s, text(concl));
    vt::PropOracle oracle(s);
    bool expected = oracle.entails(ps, c);
    bool got = check_resolution(s, ps, c).verdict == Verdict::Valid;
    entailed += expected;
    if (got != expected && disagreements++ == 0) {
      first_bad = text(concl) + " from";
      for (const auto& p : premises) first_bad += " " + text(p);
    }
  }
  std::ostringstream detail;
  detail << kResolutionSets << " sets (" << entailed << " entailed), " << disagreements << " disagreements";
  if (disagreements) detail << "; first: " << first_bad;
  report(3, disagreements == 0, detail.str());
}

// 4 -----------------------------------------------------------------------

void fm_oracle() {
  std::mt19937 rng(4242);
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  TermStore s;
  std::vector<TermId> rvars{vt::any_term(s, "z"), vt::any_term(s, "w"), vt::any_term(s, "(+ z w)")};
  int disagreements = 0, unsat = 0, sat = 0, bad_cert = 0, inconclusive = 0, oracle_conflict = 0;
  for (int round = 0; round < kFmSystems; ++round) {
    int dims = uni(1, 3), m = uni(1, 5);
    std::vector<LinearAtom> sys;
    std::vector<vt::Row> rows;
    for (int i = 0; i < m; ++i) {
      LinearAtom a;
      vt::Row r;
      for (int d = 0; d < dims; ++d) {
        int c = uni(-kFmCoef, kFmCoef);
        r.a.push_back(c);
        if (c) a.coeffs[rvars[d]] = c;
      }
      int k = uni(-2 * kFmCoef, 2 * kFmCoef);
      a.constant = k;
      r.k = k;
      int rel = uni(0, 3);
      a.rel = rel == 0 ? Rel::Lt : rel == 1 ? Rel::Eq : Rel::Le;
      r.rel = rel == 0 ? vt::Rel3::Lt : rel == 1 ? vt::Rel3::Eq : vt::Rel3::Le;
      sys.push_back(a);
      rows.push_back(r);
    }
    FmResult got = fm_decide(sys, false);
    bool witness = vt::find_witness(rows, dims).has_value();
    bool farkas = vt::find_farkas_exact(rows, dims).has_value();
    if (witness && farkas) ++oracle_conflict;
    if (!witness && !farkas) ++inconclusive;
    bool fm_sat = got.status == FmStatus::Sat;
    if (got.status == FmStatus::ResourceOut || (witness && !fm_sat) || (farkas && fm_sat)) ++disagreements;
    if (got.status == FmStatus::Unsat) {
      ++unsat;
      if (!certificates_verify(got)) ++bad_cert;
    } else {
      ++sat;
    }
  }
  std::ostringstream detail;
  detail << kFmSystems << " systems (" << sat << " SAT, " << unsat << " UNSAT), " << disagreements
         << " disagreements, " << bad_cert << " unverified certificates, " << inconclusive
         << " oracle-inconclusive, " << oracle_conflict << " oracle conflicts";
  report(4, disagreements == 0 && bad_cert == 0 && inconclusive == 0 && oracle_conflict == 0, detail.str());
}

// 5 -----------------------------------------------------------------------

void roundtrip() {
  struct Input {
    std::string text;
    bool prelude;
  };
  std::vector<Input> inputs;
  for (const char* name : {"skolem_forall.proof", "linear_arith.proof", "bind_rename.proof"})
    inputs.push_back({vt::read_text(vt::golden(name)), false});
  vt::ProofFuzzer fuzz(5);
  for (int i = 0; i < kFuzzProofs; ++i) inputs.push_back({fuzz.proof(), true});

  int mismatches = 0, not_smaller = 0, repeats = 0, named = 0, errors = 0;
  std::string first_bad;
  for (const auto& in : inputs) {
    try {
      TermStore s;
      ProofDag dag = vt::load_dag(s, in.text, in.prelude);
      auto reference = without_skolem_defines(dag.commands);
      std::string plain, shared;
      for (bool share : {false, true})
        for (bool skolems : {false, true}) {
          std::string printed = print_proof(s, dag, {share, skolems});
          if (!skolems) (share ? shared : plain) = printed;
          ProofDag again = vt::load_dag(s, printed, in.prelude);
          if (without_skolem_defines(again.commands) != reference && mismatches++ == 0) first_bad = printed;
        }
      if (!mark_shared(s, dag).assignment.empty()) ++repeats;
      if (shared.find(":named") != std::string::npos) {
        ++named;
        if (shared.size() >= plain.size()) ++not_smaller;
      } else if (shared != plain) {
        ++not_smaller;
      }
    } catch (const std::exception& e) {
      if (errors++ == 0) first_bad = e.what();
    }
  }
  std::ostringstream detail;
  detail << inputs.size() << " proofs x 4 print modes, " << mismatches << " mismatches, " << errors
         << " load errors; " << repeats << " with repeated subterms, " << named
         << " keep a name after the size filter, " << not_smaller << " shared outputs not smaller";
  if (mismatches || errors) detail << "; first: " << first_bad.substr(0, 200);
  report(5, mismatches == 0 && errors == 0 && not_smaller == 0, detail.str());
}

// 6 -----------------------------------------------------------------------

class Formulas {
 public:
  explicit Formulas(std::uint64_t seed) : rng_(seed) {}
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::string formula(int depth = 2) {
    if (depth == 0 || pick(3) == 0) return "p" + std::to_string(pick(4));
    switch (pick(7)) {
      case 0: return "(not " + formula(depth - 1) + ")";
      case 1: return "(and " + formula(depth - 1) + " " + formula(depth - 1) + ")";
      case 2: return "(or " + formula(depth - 1) + " " + formula(depth - 1) + ")";
      case 3: return "(=> " + formula(depth - 1) + " " + formula(depth - 1) + ")";
      case 4: return "(xor " + formula(depth - 1) + " " + formula(depth - 1) + ")";
      case 5: return "(= " + formula(depth - 1) + " " + formula(depth - 1) + ")";
      default:
        return "(ite " + formula(depth - 1) + " " + formula(depth - 1) + " " + formula(depth - 1) + ")";
    }
  }
  std::vector<std::string> some(int lo, int hi) {
    std::vector<std::string> out;
    for (int n = lo + pick(hi - lo + 1); n > 0; --n) out.push_back(formula());
    return out;
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    std::shuffle(v.begin(), v.end(), rng_);
  }

 private:
  std::mt19937_64 rng_;
};

std::string neg(const std::string& f) { return "(not " + f + ")"; }
std::string app(const std::string& op, const std::vector<std::string>& args) {
  std::string out = "(" + op;
  for (const auto& a : args) out += " " + a;
  return out + ")";
}
std::string cl(const std::vector<std::string>& lits) { return app("cl", lits); }

using Lits = std::vector<std::string>;

// Premise-free templates, written out from the rule definitions.
Lits template_instance(const std::string& rule, Formulas& g) {
  if (rule == "true") return {"true"};
  if (rule == "false") return {neg("false")};
  if (rule == "and_pos" || rule == "or_neg") {
    auto fs = g.some(2, 4);
    std::string pick = fs[g.pick(static_cast<int>(fs.size()))];
    return rule == "and_pos" ? Lits{neg(app("and", fs)), pick} : Lits{app("or", fs), neg(pick)};
  }
  if (rule == "and_neg") {
    auto fs = g.some(2, 4);
    Lits out{app("and", fs)};
    for (const auto& f : fs) out.push_back(neg(f));
    return out;
  }
  if (rule == "or_pos") {
    auto fs = g.some(2, 4);
    Lits out{neg(app("or", fs))};
    for (const auto& f : fs) out.push_back(f);
    return out;
  }
  std::string a = g.formula(), b = g.formula(), c = g.formula();
  std::string imp = app("=>", {a, b}), eq = app("=", {a, b}), x = app("xor", {a, b}), ite = app("ite", {a, b, c});
  if (rule == "implies_pos") return {neg(imp), neg(a), b};
  if (rule == "implies_neg1") return {imp, a};
  if (rule == "implies_neg2") return {imp, neg(b)};
  if (rule == "equiv_pos1") return {neg(eq), a, neg(b)};
  if (rule == "equiv_pos2") return {neg(eq), neg(a), b};
  if (rule == "equiv_neg1") return {eq, neg(a), neg(b)};
  if (rule == "equiv_neg2") return {eq, a, b};
  if (rule == "ite_pos1") return {neg(ite), a, c};
  if (rule == "ite_pos2") return {neg(ite), neg(a), b};
  if (rule == "ite_neg1") return {ite, a, neg(c)};
  if (rule == "ite_neg2") return {ite, neg(a), neg(b)};
  if (rule == "xor_pos1") return {neg(x), a, b};
  if (rule == "xor_pos2") return {neg(x), neg(a), neg(b)};
  if (rule == "xor_neg1") return {x, a, neg(b)};
  if (rule == "xor_neg2") return {x, neg(a), b};
  throw std::logic_error("no template for " + rule);
}

// Single-premise deductions: premise literal and conclusion.
std::pair<std::string, Lits> deduction_instance(const std::string& rule, Formulas& g) {
  if (rule == "and" || rule == "not_or") {
    auto fs = g.some(2, 4);
    std::string pick = fs[g.pick(static_cast<int>(fs.size()))];
    return rule == "and" ? std::pair{app("and", fs), Lits{pick}} : std::pair{neg(app("or", fs)), Lits{neg(pick)}};
  }
  if (rule == "or") {
    auto fs = g.some(2, 4);
    return {app("or", fs), fs};
  }
  if (rule == "not_and") {
    auto fs = g.some(2, 4);
    Lits out;
    for (const auto& f : fs) out.push_back(neg(f));
    return {neg(app("and", fs)), out};
  }
  std::string a = g.formula(), b = g.formula(), c = g.formula();
  std::string imp = app("=>", {a, b}), eq = app("=", {a, b}), x = app("xor", {a, b}), ite = app("ite", {a, b, c});
  if (rule == "implies") return {imp, {neg(a), b}};
  if (rule == "not_implies1") return {neg(imp), {a}};
  if (rule == "not_implies2") return {neg(imp), {neg(b)}};
  if (rule == "equiv1") return {eq, {neg(a), b}};
  if (rule == "equiv2") return {eq, {a, neg(b)}};
  if (rule == "not_equiv1") return {neg(eq), {a, b}};
  if (rule == "not_equiv2") return {neg(eq), {neg(a), neg(b)}};
  if (rule == "xor1") return {x, {a, b}};
  if (rule == "xor2") return {x, {neg(a), neg(b)}};
  if (rule == "not_xor1") return {neg(x), {a, neg(b)}};
  if (rule == "not_xor2") return {neg(x), {neg(a), b}};
  if (rule == "ite1") return {ite, {a, c}};
  if (rule == "ite2") return {ite, {neg(a), b}};
  if (rule == "not_ite1") return {neg(ite), {a, neg(c)}};
  if (rule == "not_ite2") return {neg(ite), {neg(a), neg(b)}};
  throw std::logic_error("no deduction for " + rule);
}

// Negate, replace or drop one literal.
Lits mutant(Lits lits, Formulas& g) {
  if (lits.empty()) return {g.formula()};
  std::size_t i = g.pick(static_cast<int>(lits.size()));
  switch (g.pick(3)) {
    case 0:
      lits[i] = lits[i].rfind("(not ", 0) == 0 ? lits[i].substr(5, lits[i].size() - 6) : neg(lits[i]);
      break;
    case 1: lits[i] = g.formula(); break;
    default: lits.erase(lits.begin() + i); break;
  }
  return lits;
}

void mutation() {
  const std::vector<std::string> templates{
      "true",       "false",      "and_pos",    "and_neg",    "or_pos",   "or_neg",   "implies_pos",
      "implies_neg1", "implies_neg2", "equiv_pos1", "equiv_pos2", "equiv_neg1", "equiv_neg2", "ite_pos1",
      "ite_pos2",   "ite_neg1",   "ite_neg2",   "xor_pos1",   "xor_pos2", "xor_neg1", "xor_neg2"};
  const std::vector<std::string> deductions{
      "implies", "not_implies1", "not_implies2", "equiv1", "equiv2",   "not_equiv1", "not_equiv2",
      "and",     "not_or",       "or",           "not_and", "xor1",    "xor2",       "not_xor1",
      "not_xor2", "ite1",        "ite2",         "not_ite1", "not_ite2"};
  int rules = 0, false_rejects = 0, false_accepts = 0, short_mutants = 0, generator_bugs = 0;
  std::vector<std::string> problems;
  Formulas g(606);

  auto run = [&](const std::string& rule, bool is_template) {
    ++rules;
    int accepted = 0, rejected_mutants = 0;
    TermStore s;
    for (int i = 0; i < kMutationInstances; ++i) {
      Lits lits;
      std::string premise;
      if (is_template) {
        lits = template_instance(rule, g);
      } else {
        std::tie(premise, lits) = deduction_instance(rule, g);
      }
      g.shuffle(lits);
      Clause c = vt::clause(s, cl(lits));
      vt::PropOracle oracle(s);
      bool sound = is_template ? oracle.tautology(c) : oracle.entails({vt::clause(s, cl({premise}))}, c);
      if (!sound) {
        ++generator_bugs;
        problems.push_back(rule + " instance not valid per oracle: " + cl(lits));
        continue;
      }
      Verdict v = is_template ? check_tautology_template(s, rule, c).verdict
                              : check_unary_deduction(s, rule, vt::clause(s, cl({premise})), c).verdict;
      if (v == Verdict::Valid) {
        ++accepted;
      } else {
        ++false_rejects;
        if (problems.size() < 5) problems.push_back(rule + " rejected " + cl(lits));
      }
    }
    for (int attempt = 0; attempt < kMutationAttempts && rejected_mutants < kMutationInstances; ++attempt) {
      Lits lits;
      std::string premise;
      if (is_template) {
        lits = template_instance(rule, g);
      } else {
        std::tie(premise, lits) = deduction_instance(rule, g);
      }
      Lits m = mutant(lits, g);
      Clause c = vt::clause(s, cl(m));
      Clause p = is_template ? Clause{} : vt::clause(s, cl({premise}));
      vt::PropOracle oracle(s);
      bool sound = is_template ? oracle.tautology(c) : oracle.entails({p}, c);
      if (sound) continue;  // mutant still valid; not a rejection case
      Verdict v = is_template ? check_tautology_template(s, rule, c).verdict
                              : check_unary_deduction(s, rule, p, c).verdict;
      if (v == Verdict::Valid) {
        ++false_accepts;
        if (problems.size() < 5) problems.push_back(rule + " accepted mutant " + cl(m));
      }
      ++rejected_mutants;
    }
    if (accepted < kMutationInstances || rejected_mutants < kMutationInstances) {
      if (rejected_mutants < kMutationInstances) ++short_mutants;
      if (problems.size() < 5)
        problems.push_back(rule + ": " + std::to_string(accepted) + " accepted, " +
                           std::to_string(rejected_mutants) + " oracle-rejected mutants");
    }
  };
  for (const auto& r : templates) run(r, true);
  for (const auto& r : deductions) run(r, false);

  std::ostringstream detail;
  detail << rules << " rules x " << kMutationInstances << " instances and " << kMutationInstances
         << " oracle-rejected mutants; " << false_rejects << " valid instances rejected, " << false_accepts
         << " mutants accepted";
  if (short_mutants) detail << ", " << short_mutants << " rules short of mutants";
  if (generator_bugs) detail << ", " << generator_bugs << " generator instances not valid";
  for (const auto& p : problems) detail << "; " << p;
  report(6, false_rejects == 0 && false_accepts == 0 && short_mutants == 0 && generator_bugs == 0, detail.str());
}

// 7 -----------------------------------------------------------------------

void structure() {
  auto run = [](const std::string& text) {
    std::ostringstream out;
    int code = check_text(text, {}, out);
    return std::pair{code, out.str()};
  };
  std::string bind = vt::read_text(vt::golden("bind_rename.proof"));
  std::string escaped = bind;
  escaped.replace(escaped.find(":premises (t5 t9 t10)"), 21, ":premises (t5 t9.t2 t10)");
  auto [escape_code, escape_out] = run(escaped);
  bool escape_ok = escape_code == kExitInvalid && escape_out.find("error[premise-escape]") != std::string::npos &&
                   escape_out.find("result: valid") == std::string::npos;

  std::string arith = vt::read_text(vt::golden("linear_arith.proof"));
  std::string truncated = arith.substr(0, arith.rfind("(step"));
  auto [final_code, final_out] = run(truncated);
  bool final_ok = final_code == kExitInvalid && final_out.find("error[final-step]") != std::string::npos;

  std::ostringstream detail;
  detail << "inner premise t9.t2 used outside: exit " << escape_code
         << (escape_ok ? " with premise-escape" : " WITHOUT premise-escape") << "; proof without final (cl): exit "
         << final_code << (final_ok ? " with final-step" : " WITHOUT final-step");
  report(7, escape_ok && final_ok, detail.str());
}

// 8 -----------------------------------------------------------------------

void totality() {
  namespace fs = std::filesystem;
  fs::path problem = fs::temp_directory_path() / ("vtcheck_acceptance_" + std::to_string(::getpid()) + ".smt2");
  std::ofstream(problem) << vt::kPrelude;
  DriverOptions opts;
  opts.problem = problem.string();

  // Every 20th input comes from a fixed corpus of valid and unchecked proofs
  // over their own signature; the one after it is a mutant of it.
  std::vector<std::string> corpus;
  for (const char* name : {"skolem_forall.proof", "linear_arith.proof", "bind_rename.proof"})
    corpus.push_back(vt::read_text(vt::golden(name)));
  corpus.push_back("(assume h1 (< (* x x) 0)) (step t2 (cl) :rule nla_generic :premises (h1))");

  vt::ProofFuzzer fuzz(8);
  std::map<std::string, int> outcomes;
  int crashes = 0, internal = 0, inconsistent = 0;
  std::string first_bad;
  for (int i = 0; i < kTotalityInputs; ++i) {
    std::string text;
    bool own_signature = i % 20 < 2;
    if (own_signature) {
      text = corpus[(i / 20) % corpus.size()];
      if (i % 20 == 1) text = fuzz.mutate(text);
    } else {
      text = fuzz.proof();
      if (i % 10 >= 3) text = fuzz.mutate(text);
    }
    std::ostringstream out;
    int code = -1;
    try {
      code = check_text(text, own_signature ? DriverOptions{} : opts, out);
    } catch (...) {
      ++crashes;
      if (first_bad.empty()) first_bad = text;
      continue;
    }
    std::string o = out.str();
    std::string outcome;
    if (code == kExitValid && o.find("result: valid") != std::string::npos) {
      outcome = "valid";
    } else if (code == kExitInvalid && (o.find("result: invalid") != std::string::npos ||
                                        o.find("result: rejected") != std::string::npos)) {
      outcome = "invalid";
    } else if (code == kExitInvalid && o.find("result: unchecked") != std::string::npos) {
      outcome = "unchecked";
    } else if (code == kExitError && o.rfind("error[", 0) == 0 && o.find("result:") == std::string::npos) {
      outcome = "error";
    } else {
      ++inconsistent;
      if (first_bad.empty()) first_bad = o + "\n" + text;
      continue;
    }
    if (o.find("internal-error") != std::string::npos) {
      ++internal;
      if (first_bad.empty()) first_bad = o + "\n" + text;
    }
    ++outcomes[outcome];
  }
  fs::remove(problem);
  std::ostringstream detail;
  detail << kTotalityInputs << " inputs:";
  for (const auto& [k, v] : outcomes) detail << " " << k << "=" << v;
  detail << "; " << crashes << " escaped exceptions, " << internal << " internal errors, " << inconsistent
         << " outcome/exit mismatches";
  if (!first_bad.empty()) detail << "; first: " << first_bad.substr(0, 300);
  report(8, crashes == 0 && internal == 0 && inconsistent == 0, detail.str());
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::pair<int, std::function<void()>>> criteria{
      {1, goldens}, {2, tightening}, {3, resolution}, {4, fm_oracle},
      {5, roundtrip}, {6, mutation}, {7, structure}, {8, totality}};
  // Optional arguments select criteria by number.
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  for (auto& [n, run] : criteria) {
    if (!only.empty() && !only.count(n)) continue;
    try {
      run();
    } catch (const std::exception& e) {
      report(n, false, std::string("exception: ") + e.what());
    }
  }
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed") << std::endl;
  return failures ? 1 : 0;
}
