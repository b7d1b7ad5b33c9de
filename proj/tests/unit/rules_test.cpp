#include <gtest/gtest.h>

#include <random>

#include "support/helpers.hpp"
#include "support/prop_oracle.hpp"

using namespace vtcheck;
using vtcheck::testing::check;
using vtcheck::testing::clause;
using vtcheck::testing::golden;
using vtcheck::testing::read_text;
using vtcheck::testing::result_of;
using vtcheck::testing::term;

namespace {

class Rules : public ::testing::Test {
 protected:
  TermStore s;

  Verdict tmpl(const std::string& rule, const std::string& cl) {
    return check_tautology_template(s, rule, clause(s, cl)).verdict;
  }
  Verdict deduce(const std::string& rule, const std::string& premise, const std::string& cl,
                 bool strict = false) {
    return check_unary_deduction(s, rule, clause(s, premise), clause(s, cl), strict).verdict;
  }
  Verdict simp(const std::string& rule, const std::string& cl, unsigned bound = 16) {
    return check_bool_simplify(s, rule, clause(s, cl), bound).verdict;
  }
  Verdict inst(const std::string& cl, const std::string& args) {
    auto cmds = load_proof("(step t (cl) :rule forall_inst :args " + args + ")", s,
                           &vtcheck::testing::prelude());
    return check_forall_inst(s, clause(s, cl), std::get<StepCmd>(cmds[0].body).args).verdict;
  }
  std::string golden_text(const std::string& name) { return read_text(golden(name)); }
};

constexpr Verdict V = Verdict::Valid;
constexpr Verdict I = Verdict::Invalid;
constexpr Verdict Un = Verdict::Unchecked;

TEST(RuleTable, CoversCatalogue) {
  const auto& t = rule_table();
  for (const char* r :
       {"true", "false", "and_pos", "and_neg", "and_neq", "or_pos", "or_neg", "implies_pos", "implies_neg1",
        "implies_neg2", "equiv_pos1", "equiv_pos2", "equiv_neg1", "equiv_neg2", "ite_pos1", "ite_pos2",
        "ite_neg1", "ite_neg2", "xor_pos1", "xor_pos2", "xor_neg1", "xor_neg2", "ite_intro", "distinct_elim",
        "eq_reflexive", "eq_transitive", "eq_congruent", "eq_congruent_pred", "implies", "not_implies1",
        "not_implies2", "equiv1", "equiv2", "not_equiv1", "not_equiv2", "and", "not_or", "or", "not_and",
        "xor1", "xor2", "not_xor1", "not_xor2", "ite1", "ite2", "not_ite1", "not_ite2", "refl", "cong",
        "trans", "resolution", "th_resolution", "contraction", "forall_inst", "sko_ex", "sko_forall", "bind",
        "let", "subproof", "la_generic", "lia_generic", "la_disequality", "la_tautology", "la_totality",
        "la_rw_eq", "bool_simplify", "connective_def", "and_simplify", "or_simplify", "not_simplify",
        "implies_simplify", "equiv_simplify", "qnt_rm_unused", "qnt_join", "qnt_simplify", "ac_simp",
        "tmp_ac_simp", "connective_equiv", "tmp_bfun_elim", "nla_generic", "tmp_skolemize"})
    EXPECT_TRUE(t.count(r)) << r;
  EXPECT_EQ(t.at("and_neq"), t.at("and_neg"));
  EXPECT_EQ(t.at("nla_generic"), CheckerKind::Trusted);
  EXPECT_EQ(t.at("tmp_skolemize"), CheckerKind::Trusted);
}

TEST_F(Rules, AndPos) {
  EXPECT_EQ(tmpl("and_pos", "(cl (not (and p0 p1 p2)) p1)"), V);
  EXPECT_EQ(tmpl("and_pos", "(cl (not (and p0 p1 p2)) p3)"), I);
  EXPECT_EQ(tmpl("and_pos", "(cl (and p0 p1 p2) p1)"), I);
}

TEST_F(Rules, TemplatesUpToImplicitTransformations) {
  EXPECT_EQ(tmpl("and_neg", "(cl (and p0 p1) (not p0) (not p1))"), V);
  EXPECT_EQ(tmpl("and_neg", "(cl (and p0 p0) (not p0))"), V);
  EXPECT_EQ(tmpl("or_pos", "(cl (not (or p0 (not p1))) p0 (not p1))"), V);
  EXPECT_EQ(tmpl("or_neg", "(cl (or p0 (not p1)) (not (not p1)))"), V);
  EXPECT_EQ(tmpl("or_neg", "(cl (or p0 (not p1)) p1)"), V);
  EXPECT_EQ(tmpl("equiv_pos2", "(cl (not (= p1 p0)) (not p0) p1)"), V);
  EXPECT_EQ(tmpl("equiv_pos2", "(cl (not (= p0 p1)) p0 (not p1))"), V);
  EXPECT_EQ(tmpl("equiv_pos2", "(cl (not (= p0 p1)) p0 p1)"), I);
  EXPECT_EQ(tmpl("true", "(cl true)"), V);
  EXPECT_EQ(tmpl("false", "(cl (not false))"), V);
  EXPECT_EQ(tmpl("false", "(cl false)"), I);
}

TEST_F(Rules, IteDeductionsCollapseAndNegate) {
  // ite1: (ite c a b) |- c v b, here with b = c: the duplicate collapses.
  EXPECT_EQ(deduce("ite1", "(cl (ite p0 p1 p0))", "(cl p0)"), V);
  // ite2: (ite c a b) |- ~c v a with c itself negated.
  EXPECT_EQ(deduce("ite2", "(cl (ite (not p0) p1 p2))", "(cl (not (not p0)) p1)"), V);
  EXPECT_EQ(deduce("ite2", "(cl (ite (not p0) p1 p2))", "(cl p0 p1)"), V);
  EXPECT_EQ(deduce("ite2", "(cl (ite p0 p1 p2))", "(cl (not p0) p2)"), I);
  EXPECT_EQ(tmpl("ite_pos2", "(cl (not (ite p0 p1 p2)) (not p0) p1)"), V);
  EXPECT_EQ(tmpl("ite_neg2", "(cl (ite p0 p1 p2) (not p0) (not p1))"), V);
}

TEST_F(Rules, Implies) {
  EXPECT_EQ(deduce("implies", "(cl (=> p0 p1))", "(cl (not p0) p1)"), V);
  EXPECT_EQ(deduce("implies", "(cl (=> p0 p1))", "(cl (not p0) p1)", true), V);
  EXPECT_EQ(deduce("implies", "(cl (=> p0 p1))", "(cl p1 (not p0))", true), I);
  EXPECT_EQ(deduce("implies", "(cl (=> p0 p1))", "(cl p1 (not p0))", false), V);
  EXPECT_EQ(deduce("implies", "(cl (=> p0 p1))", "(cl p0 p1)"), I);
}

TEST_F(Rules, OrSplitsDisjunction) {
  EXPECT_EQ(deduce("or", "(cl (or (not (forall ((v U)) (p v))) (p a)))", "(cl (not (forall ((v U)) (p v))) (p a))"),
            V);
  EXPECT_EQ(deduce("or", "(cl (or p0 p1))", "(cl p0)"), I);
  EXPECT_EQ(deduce("not_or", "(cl (not (or p0 p1 p2)))", "(cl (not p2))"), V);
  EXPECT_EQ(deduce("and", "(cl (and p0 p1))", "(cl p1)"), V);
  EXPECT_EQ(deduce("not_and", "(cl (not (and p0 p1)))", "(cl (not p0) (not p1))"), V);
  EXPECT_EQ(deduce("equiv1", "(cl (= p0 p1))", "(cl (not p0) p1)"), V);
  EXPECT_EQ(deduce("not_equiv2", "(cl (not (= p0 p1)))", "(cl (not p0) (not p1))"), V);
  EXPECT_EQ(deduce("not_equiv2", "(cl (not (= p0 p1)))", "(cl p0 (not p1))"), I);
}

TEST_F(Rules, PropEntails) {
  EXPECT_TRUE(prop_entails(s, {clause(s, "(cl (= x 2))"), clause(s, "(cl (not (< 3 x)) (not (= x 2)))")},
                           clause(s, "(cl (not (< 3 x)))")));
  EXPECT_TRUE(prop_entails(s, {clause(s, "(cl r)"), clause(s, "(cl (not r))")}, {}));
  EXPECT_FALSE(prop_entails(s, {clause(s, "(cl r s)")}, clause(s, "(cl r)")));
  // Reoriented equalities are the same atom.
  EXPECT_TRUE(prop_entails(s, {clause(s, "(cl (= a b))"), clause(s, "(cl (not (= b a)) r)")}, clause(s, "(cl r)")));
}

TEST_F(Rules, Resolution) {
  EXPECT_EQ(check_resolution(s, {clause(s, "(cl r s)")}, clause(s, "(cl r)")).verdict, I);
  EXPECT_EQ(check_resolution(s, {clause(s, "(cl r s)"), clause(s, "(cl (not s))")}, clause(s, "(cl r)")).verdict, V);
  // Double negation on the pivot.
  EXPECT_EQ(check_resolution(s, {clause(s, "(cl (not (not r)) s)"), clause(s, "(cl (not r))")}, clause(s, "(cl s)"))
                .verdict,
            V);
}

TEST_F(Rules, ResolutionMatchesTruthTable) {
  std::mt19937 rng(3);
  const char* atoms[] = {"p0", "p1", "p2", "p3"};
  for (int round = 0; round < 300; ++round) {
    auto lit = [&] {
      std::string a = atoms[rng() % 4];
      return rng() % 2 ? "(not " + a + ")" : a;
    };
    std::vector<Clause> premises;
    std::size_t n = 1 + rng() % 4;
    for (std::size_t i = 0; i < n; ++i) {
      std::string c = "(cl";
      for (std::size_t k = rng() % 3 + 1; k > 0; --k) c += " " + lit();
      premises.push_back(clause(s, c + ")"));
    }
    std::string c = "(cl";
    for (std::size_t k = rng() % 3; k > 0; --k) c += " " + lit();
    Clause concl = clause(s, c + ")");
    vtcheck::testing::PropOracle oracle(s);
    bool expected = oracle.entails(premises, concl);
    EXPECT_EQ(prop_entails(s, premises, concl), expected);
    EXPECT_EQ(check_resolution(s, premises, concl).verdict == V, expected);
  }
}

TEST_F(Rules, ForallInst) {
  EXPECT_EQ(inst("(cl (or (not (forall ((v U)) (p v))) (p a)))", "((:= v a))"), V);
  EXPECT_EQ(inst("(cl (not (forall ((v U)) (p v))) (p a))", "((:= v a))"), V);
  EXPECT_EQ(inst("(cl (not (forall ((v U)) (p v))) (p b))", "((:= v a))"), I);
  EXPECT_EQ(inst("(cl (not (forall ((v U)) (p v))) (p a))", "((:= u a))"), I);
  // The instance may come back with its equality reoriented.
  EXPECT_EQ(inst("(cl (not (forall ((v U)) (= v b))) (= b c))", "((:= v c))"), V);
  EXPECT_EQ(inst("(cl (not (forall ((v U) (u U)) (P v u))) (P a b))", "((:= v a) (:= u b))"), V);
}

TEST_F(Rules, ForallInstPrenexes) {
  EXPECT_EQ(inst("(cl (not (forall ((v U)) (=> (p v) (not (exists ((u U)) (P v u)))))) (=> (p a) (not (P a b))))",
                 "((:= v a) (:= u b))"),
            V);
}

TEST_F(Rules, EqualityTemplates) {
  EXPECT_EQ(tmpl("eq_transitive", "(cl (not (= a b)) (not (= b c)) (= a c))"), V);
  EXPECT_EQ(tmpl("eq_transitive", "(cl (not (= a b)) (not (= c b)) (= c a))"), V);
  EXPECT_EQ(tmpl("eq_transitive", "(cl (not (= a b)) (not (= b c)) (= a d))"), I);
  EXPECT_EQ(tmpl("eq_reflexive", "(cl (= (f a) (f a)))"), V);
  EXPECT_EQ(tmpl("eq_congruent", "(cl (not (= a b)) (not (= c d)) (= (g a c) (g b d)))"), V);
  EXPECT_EQ(tmpl("eq_congruent", "(cl (not (= a b)) (= (g a c) (g b d)))"), I);
  EXPECT_EQ(tmpl("eq_congruent_pred", "(cl (not (= a b)) (not (p a)) (p b))"), V);
}

TEST_F(Rules, SkolemAndCongruence) {
  CheckReport r = check(s, golden_text("skolem_forall.proof"));
  EXPECT_TRUE(r.valid);
  for (const char* idx : {"t3.t1", "t3.t2", "t3", "t4", "t5", "t6"}) EXPECT_EQ(result_of(r, idx).verdict, V) << idx;
}

TEST_F(Rules, SkoForallWrongPolarity) {
  std::string text = golden_text("skolem_forall.proof");
  // Flip the choice term of the anchor only.
  std::string from = "(:= (x U) (choice ((x U)) (not (p x))))";
  text.replace(text.find(from), from.size(), "(:= (x U) (choice ((x U)) (p x)))");
  CheckReport r = check(s, text);
  EXPECT_EQ(result_of(r, "t3").verdict, I);
}

TEST_F(Rules, SkoEx) {
  std::string text =
      "(anchor :step t1 :args ((:= (v U) (choice ((v U)) (p v)))))\n"
      "(step t1.t1 (cl (= v (choice ((v U)) (p v)))) :rule refl)\n"
      "(step t1.t2 (cl (= (p v) (p (choice ((v U)) (p v))))) :rule cong :premises (t1.t1))\n"
      "(step t1 (cl (= (exists ((v U)) (p v)) (p (choice ((v U)) (p v))))) :rule sko_ex)\n";
  CheckReport r = check(s, text);
  EXPECT_EQ(result_of(r, "t1").verdict, V);
  std::string wrong = text;
  wrong.replace(wrong.find(":rule sko_ex"), 12, ":rule sko_forall");
  EXPECT_EQ(result_of(check(s, wrong), "t1").verdict, I);
}

TEST_F(Rules, BindRenameGolden) {
  CheckReport r = check(s, golden_text("bind_rename.proof"));
  EXPECT_TRUE(r.valid);
  EXPECT_EQ(result_of(r, "t9").verdict, V);
  EXPECT_EQ(result_of(r, "t12").verdict, V);
}

TEST_F(Rules, BindWrongBody) {
  std::string text = golden_text("bind_rename.proof");
  std::string from = "(step t9 (cl (= (forall ((z2 U)) (p z2)) (forall ((vr4 U)) (p vr4)))) :rule bind)";
  text.replace(text.find(from), from.size(),
               "(step t9 (cl (= (forall ((z2 U)) (p z2)) (forall ((vr4 U)) (q vr4)))) :rule bind)");
  EXPECT_EQ(result_of(check(s, text), "t9").verdict, I);
}

TEST_F(Rules, BindExists) {
  std::string text =
      "(anchor :step t1 :args ((:= u v)))\n"
      "(step t1.t1 (cl (= u v)) :rule refl)\n"
      "(step t1.t2 (cl (= (p u) (p v))) :rule cong :premises (t1.t1))\n"
      "(step t1 (cl (= (exists ((u U)) (p u)) (exists ((v U)) (p v)))) :rule bind)\n";
  EXPECT_EQ(result_of(check(s, text), "t1").verdict, V);
}

TEST_F(Rules, CongAndTrans) {
  std::string text =
      "(assume h1 (= a b)) (assume h2 (= b c))\n"
      "(step t3 (cl (= a c)) :rule trans :premises (h1 h2))\n"
      "(step t4 (cl (= (f a) (f c))) :rule cong :premises (t3))\n"
      "(step t5 (cl (= (f c) (f a))) :rule cong :premises (t3))\n"
      "(step t6 (cl (= (f a) (f b))) :rule cong :premises (h2))\n"
      "(step t7 (cl (= a (f c))) :rule trans :premises (h1 h2))\n";
  CheckReport r = check(s, text);
  EXPECT_EQ(result_of(r, "t3").verdict, V);
  EXPECT_EQ(result_of(r, "t4").verdict, V);
  EXPECT_EQ(result_of(r, "t5").verdict, V);
  EXPECT_EQ(result_of(r, "t6").verdict, I);
  EXPECT_EQ(result_of(r, "t7").verdict, I);
}

const char* kLemma =
    "(assume h1 s) (step t1 (cl s) :rule hole :premises (h1))\n"
    "(assume a2 p0)\n";

TEST_F(Rules, SubproofDischargeToFalse) {
  std::string text = std::string(kLemma) +
                     "(step t3 (cl false) :rule hole :premises (a2))\n"
                     "(step t4 (cl (not p0)) :rule subproof :discharge (a2))\n";
  EXPECT_EQ(result_of(check(s, text), "t4").verdict, V);
}

TEST_F(Rules, SubproofDischarge) {
  std::string body = std::string(kLemma) + "(step t3 (cl p1) :rule hole :premises (a2))\n";
  EXPECT_EQ(result_of(check(s, body + "(step t4 (cl (not p0) p1) :rule subproof :discharge (a2))\n"), "t4").verdict,
            V);
  EXPECT_EQ(result_of(check(s, body + "(step t4 (cl (not p2) p1) :rule subproof :discharge (a2))\n"), "t4").verdict,
            I);
}

TEST_F(Rules, BoolSimplify) {
  EXPECT_EQ(simp("connective_equiv", "(cl (= (and p0 p0) p0))"), V);
  EXPECT_EQ(simp("bool_simplify", "(cl (= (and p0 (or p1 p0)) p0))"), V);
  EXPECT_EQ(simp("bool_simplify", "(cl (= (and p0 (or p1 p0)) p1))"), I);
  EXPECT_EQ(simp("qnt_rm_unused", "(cl (= (forall ((v U) (u U)) (p v)) (forall ((v U)) (p v))))"), V);
  EXPECT_EQ(simp("qnt_rm_unused", "(cl (= (forall ((v U) (u U)) (P v u)) (forall ((v U)) (P v v))))"), I);
  EXPECT_EQ(simp("ac_simp", "(cl (= (or p0 (or p1 p2)) (or p2 p1 p0)))"), V);
}

TEST_F(Rules, BoolSimplifyAtomBound) {
  EXPECT_EQ(simp("bool_simplify", "(cl (= (and p0 p1 p2 p3) (and p3 p2 p1 p0)))", 3), Un);
  EXPECT_EQ(simp("bool_simplify", "(cl (= (and p0 p1 p2 p3) (and p3 p2 p1 p0)))", 4), V);
}

TEST_F(Rules, BoolSimplifyMatchesTruthTable) {
  std::mt19937 rng(5);
  std::function<std::string(int)> gen = [&](int depth) -> std::string {
    static const char* atoms[] = {"p0", "p1", "p2", "true", "false"};
    if (depth == 0 || rng() % 4 == 0) return atoms[rng() % 5];
    switch (rng() % 6) {
      case 0: return "(not " + gen(depth - 1) + ")";
      case 1: return "(and " + gen(depth - 1) + " " + gen(depth - 1) + ")";
      case 2: return "(or " + gen(depth - 1) + " " + gen(depth - 1) + ")";
      case 3: return "(=> " + gen(depth - 1) + " " + gen(depth - 1) + ")";
      case 4: return "(xor " + gen(depth - 1) + " " + gen(depth - 1) + ")";
      default: return "(ite " + gen(depth - 1) + " " + gen(depth - 1) + " " + gen(depth - 1) + ")";
    }
  };
  int equivalent = 0;
  for (int round = 0; round < 400; ++round) {
    TermId lhs = term(s, gen(3)), rhs = term(s, gen(2));
    vtcheck::testing::PropOracle oracle(s);
    bool expected = oracle.equivalent(lhs, rhs);
    equivalent += expected;
    Clause c{s.mk_eq(lhs, rhs)};
    EXPECT_EQ(check_bool_simplify(s, "bool_simplify", c).verdict == V, expected)
        << term_to_string(s, c[0]);
  }
  EXPECT_GT(equivalent, 5);
}

TEST_F(Rules, TrustedAndUnknownAreUnchecked) {
  CheckReport r = check(s, "(assume h1 (< (* x x) 0)) (step t2 (cl (not (< (* x x) 0))) :rule nla_generic) "
                           "(step t3 (cl) :rule mystery :premises (h1 t2))");
  EXPECT_EQ(result_of(r, "t2").verdict, Un);
  EXPECT_EQ(result_of(r, "t3").verdict, Un);
  EXPECT_FALSE(r.valid);
  CheckOptions allow;
  allow.allow_unchecked = true;
  EXPECT_TRUE(check(s, "(assume h1 r) (step t2 (cl) :rule nla_generic :premises (h1))", allow).valid);
}

TEST_F(Rules, SkipRules) {
  CheckOptions opts;
  opts.skip_rules = {"la_generic"};
  CheckReport r = check(s, golden_text("linear_arith.proof"), opts);
  EXPECT_EQ(result_of(r, "t4").verdict, Un);
  EXPECT_EQ(result_of(r, "t5").verdict, V);
}

TEST_F(Rules, InvalidReasonNamesStepAndRule) {
  std::string text = golden_text("linear_arith.proof");
  text.replace(text.find("(not (= x 2))) :rule la_generic"), 13, "(= x 2)");
  CheckReport r = check(s, text);
  const StepResult& t4 = result_of(r, "t4");
  EXPECT_EQ(t4.verdict, I);
  EXPECT_NE(t4.reason.find("t4"), std::string::npos);
  EXPECT_NE(t4.reason.find("la_generic"), std::string::npos);
}

TEST_F(Rules, StrictWarnings) {
  CheckOptions strict;
  strict.strict = true;
  CheckReport r = check(s, "(assume h1 (=> p0 p1)) (step t2 (cl (not p0) p1) :rule implies :premises (h1) :args (a))",
                        strict);
  bool unused = false;
  for (const auto& d : r.diagnostics) unused |= d.code == "unused-args" && d.severity == Severity::Warning;
  EXPECT_TRUE(unused);

  CheckReport ctx = check(s,
                          "(anchor :step t1 :args ((:= (u U) v))) (step t1.t1 (cl (not p0) p0) :rule hole) "
                          "(step t1.t2 (cl (= u v)) :rule refl) "
                          "(step t1 (cl (= (forall ((u U)) (p u)) (forall ((v U)) (p v)))) :rule bind)",
                          strict);
  bool context_rule = false;
  for (const auto& d : ctx.diagnostics) context_rule |= d.code == "context-rule" && d.step == "t1.t1";
  EXPECT_TRUE(context_rule);
}

TEST_F(Rules, Deterministic) {
  std::string text = golden_text("bind_rename.proof");
  CheckReport a = check(s, text), b = check(s, text);
  ASSERT_EQ(a.steps.size(), b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    EXPECT_EQ(a.steps[i].verdict, b.steps[i].verdict);
    EXPECT_EQ(a.steps[i].reason, b.steps[i].reason);
  }
}

TEST_F(Rules, IteIntroAndDistinct) {
  EXPECT_EQ(tmpl("ite_intro", "(cl (= (p (ite p0 a b)) (and (p (ite p0 a b)) (ite p0 (= (ite p0 a b) a) (= (ite p0 a b) b)))))"),
            V);
  EXPECT_EQ(tmpl("ite_intro", "(cl (= (p (ite p0 a b)) (and (p (ite p0 a b)) (ite p0 (= (ite p0 a b) b) (= (ite p0 a b) a)))))"),
            I);
  EXPECT_EQ(tmpl("distinct_elim", "(cl (= (distinct a b) (not (= a b))))"), V);
  EXPECT_EQ(tmpl("distinct_elim", "(cl (= (distinct a b c) (and (not (= a b)) (not (= a c)) (not (= b c)))))"), V);
  EXPECT_EQ(tmpl("distinct_elim", "(cl (= (distinct a b c) (and (not (= a b)) (not (= b c)))))"), I);
}

}  // namespace
