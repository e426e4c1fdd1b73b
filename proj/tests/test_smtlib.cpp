#include "generators.hpp"

#include "lazybv/errors.hpp"
#include "lazybv/smtlib.hpp"

#include <gtest/gtest.h>

using namespace lazybv;

TEST(Smtlib, ParsesDeclarationsAndAssertions)
{
  TermTable t;
  const Script s = parse_script(t, "(declare-const x (_ BitVec 4))(assert (= (bvmul x x) #x9))(check-sat)");
  EXPECT_EQ(s.declarations.size(), 1u);
  EXPECT_EQ(s.assertions.size(), 1u);
  EXPECT_EQ(s.commands.back().type, Command::Type::CheckSat);
}

TEST(Smtlib, AssertionMustBeBool)
{
  TermTable t;
  EXPECT_THROW(parse_script(t, "(declare-const x (_ BitVec 4))(declare-const y (_ BitVec 4))(assert (bvadd x y))"), SortError);
}

TEST(Smtlib, ConstantExtractEvaluatesTrue)
{
  TermTable t;
  const Script s = parse_script(t, "(assert (= ((_ extract 3 0) #x5A) #xA))");
  ASSERT_EQ(s.assertions.size(), 1u);
  EXPECT_TRUE(std::get<bool>(eval(t, s.assertions[0], Model{})));
  // #x0A has eight bits, so comparing it with a 4-bit slice is ill-sorted.
  EXPECT_THROW(parse_script(t, "(assert (= ((_ extract 3 0) #x5A) #x0A))"), SortError);
}

TEST(Smtlib, LiteralForms)
{
  TermTable t;
  const Script s = parse_script(t, "(assert (= #b1010 (_ bv10 4)))(assert (= #x0a (_ bv10 8)))");
  for (Term a : s.assertions) EXPECT_TRUE(std::get<bool>(eval(t, a, Model{})));
}

TEST(Smtlib, IndexedOperatorsLetAndDefineFun)
{
  TermTable t;
  const Script s = parse_script(t, R"(
    (set-logic QF_BV)
    (set-info :status sat) ; trailing comment
    (declare-fun x () (_ BitVec 4))
    (define-fun k () (_ BitVec 8) ((_ zero_extend 4) x))
    (assert (let ((a ((_ sign_extend 4) x)) (b k)) (distinct a b)))
    (check-sat)
    (exit))");
  EXPECT_EQ(s.logic, "QF_BV");
  ASSERT_TRUE(s.status.has_value());
  EXPECT_EQ(*s.status, "sat");
  ASSERT_EQ(s.assertions.size(), 1u);
  const Term x = s.declarations.at(0);
  Model m;
  m.set(x, BvValue::from_u64(4, 3));
  EXPECT_FALSE(std::get<bool>(eval(t, s.assertions[0], m)));
  m.set(x, BvValue::from_u64(4, 9));
  EXPECT_TRUE(std::get<bool>(eval(t, s.assertions[0], m)));
}

TEST(Smtlib, Errors)
{
  TermTable t;
  EXPECT_THROW(parse_script(t, "(assert (= y #x0))"), UndeclaredSymbolError);
  EXPECT_THROW(parse_script(t, "(push 1)"), UnsupportedFeatureError);
  EXPECT_THROW(parse_script(t, "(declare-fun f ((_ BitVec 4)) (_ BitVec 4))"), UnsupportedFeatureError);
  EXPECT_THROW(parse_script(t, "(assert (forall ((z (_ BitVec 4))) true))"), UnsupportedFeatureError);
  try {
    parse_script(t, "(assert true)\n  (assert (and true)");
    FAIL() << "expected a syntax error";
  } catch (const SyntaxError &e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Smtlib, PrintsCanonicalForms)
{
  TermTable t;
  const Term x = t.mk_symbol("x", Sort::bv(4));
  const Term y = t.mk_symbol("y", Sort::bv(4));
  EXPECT_EQ(print_term(t, t.bvmul(x, y)), "(bvmul x y)");
  EXPECT_EQ(print_term(t, t.mk_const(4, 10)), "#xa");
  EXPECT_EQ(print_term(t, t.mk_const(3, 5)), "#b101");
  EXPECT_EQ(print_term(t, t.extract(2, 1, x)), "((_ extract 2 1) x)");
  EXPECT_EQ(print_symbol("a b"), "|a b|");
  EXPECT_EQ(print_symbol("ap_mul!3"), "ap_mul!3");
}

TEST(Smtlib, RandomTermsRoundTrip)
{
  TermTable t;
  gen::FormulaGenerator gen(t, 7);
  for (int i = 0; i < 1000; ++i) {
    const auto f = gen.next();
    Parser p(t);
    std::string decls;
    for (Term s : f.symbols) decls += "(declare-fun " + t.node(s).name + " () " + t.sort(s).to_string() + ")";
    p.parse_script(decls);
    for (Term a : f.assertions) {
      ASSERT_EQ(p.parse_term(print_term(t, a)), a);
      ASSERT_EQ(p.parse_term(print_term(t, a, PrintOptions{ false })), a);
    }
  }
}

TEST(Smtlib, ScriptRoundTrip)
{
  TermTable t;
  const std::string text = "(declare-fun x () (_ BitVec 6))(declare-fun y () (_ BitVec 6))"
                           "(assert (let ((m (bvmul x y))) (and (bvult m x) (= (bvsrem m y) ((_ extract 5 0) (concat x y))))))";
  const Script a = parse_script(t, text);
  const Script b = parse_script(t, print_script(t, a));
  EXPECT_EQ(a.assertions, b.assertions);
  EXPECT_EQ(a.declarations, b.declarations);
}

TEST(Smtlib, ParseValue)
{
  SExprReader r("#b0110 (_ bv300 12) true");
  EXPECT_EQ(std::get<BvValue>(parse_value(*r.next())), BvValue::from_u64(4, 6));
  EXPECT_EQ(std::get<BvValue>(parse_value(*r.next())), BvValue::from_u64(12, 300));
  EXPECT_TRUE(std::get<bool>(parse_value(*r.next())));
}
