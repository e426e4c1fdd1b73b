#include "generators.hpp"

#include "lazybv/backend.hpp"
#include "lazybv/errors.hpp"
#include "lazybv/smtlib.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace lazybv;

namespace {

std::vector<std::string> backend_specs()
{
  std::vector<std::string> specs{ "builtin", "oracle" };
  if (std::filesystem::exists(LAZYBV_CLI_PATH)) specs.push_back(std::string("external:") + LAZYBV_CLI_PATH + " interactive");
  return specs;
}

class AnyBackend : public ::testing::TestWithParam<std::string>
{};

bool all_hold(const TermTable &t, const std::vector<Term> &asserted, const Model &m)
{
  Evaluator ev(t, m);
  for (Term a : asserted)
    if (!ev.eval_bool(a)) return false;
  return true;
}

}// namespace

TEST_P(AnyBackend, TrivialConjunctions)
{
  TermTable t;
  auto b = make_backend(t, GetParam());
  EXPECT_EQ(b->check_sat(), Result::Sat);
  const Term x = t.mk_symbol("x", Sort::bv(4));
  b->assert_term(t.mk_true());
  b->assert_term(t.eq(x, x));
  EXPECT_EQ(b->check_sat(), Result::Sat);
  b->assert_term(t.eq(x, t.mk_const(4, 5)));
  ASSERT_EQ(b->check_sat(), Result::Sat);
  std::vector<Term> want{ x };
  EXPECT_EQ(std::get<BvValue>(*b->get_value(want).find(x)), BvValue::from_u64(4, 5));
  b->assert_term(t.eq(x, t.mk_const(4, 2)));
  EXPECT_EQ(b->check_sat(), Result::Unsat);
  EXPECT_EQ(b->state(), Backend::State::UnsatKnown);
  b->assert_term(t.eq(x, x));
  EXPECT_EQ(b->check_sat(), Result::Unsat);
}

TEST_P(AnyBackend, GetValueErrors)
{
  TermTable t;
  auto b = make_backend(t, GetParam());
  const Term x = t.mk_symbol("x", Sort::bv(4));
  std::vector<Term> want{ x };
  EXPECT_THROW(b->get_value(want), NotSatError);
  b->assert_term(t.bvult(x, t.mk_const(4, 3)));
  ASSERT_EQ(b->check_sat(), Result::Sat);
  std::vector<Term> bad{ t.bvadd(x, x) };
  EXPECT_THROW(b->get_value(bad), UndeclaredSymbolError);
}

TEST_P(AnyBackend, ModelsSatisfyRandomFormulas)
{
  TermTable t;
  gen::FormulaShape shape;
  shape.max_width = 4;
  shape.max_free_bits = 12;
  gen::FormulaGenerator gen(t, 99, shape);
  const int count = GetParam().starts_with("external") ? 40 : 150;
  for (int i = 0; i < count; ++i) {
    const auto f = gen.next();
    auto b = make_backend(t, GetParam());
    for (Term a : f.assertions) b->assert_term(a);
    if (b->check_sat() != Result::Sat) continue;
    ASSERT_TRUE(all_hold(t, f.assertions, b->get_value(f.symbols)));
  }
}

INSTANTIATE_TEST_SUITE_P(Backends, AnyBackend, ::testing::ValuesIn(backend_specs()),
  [](const auto &info) { return info.param.starts_with("external") ? std::string("external") : info.param; });

TEST(Backend, BuiltinAgreesWithOracleOnRandomFormulas)
{
  TermTable t;
  gen::FormulaShape shape;
  shape.max_width = 5;
  shape.max_free_bits = 14;
  gen::FormulaGenerator gen(t, 2024, shape);
  int sat = 0;
  int unsat = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto f = gen.next();
    BuiltinBackend builtin(t);
    OracleBackend oracle(t);
    for (Term a : f.assertions) {
      builtin.assert_term(a);
      oracle.assert_term(a);
    }
    const Result r = builtin.check_sat();
    ASSERT_EQ(r, oracle.check_sat()) << print_term(t, t.and_(f.assertions));
    if (r == Result::Sat) {
      ++sat;
      ASSERT_TRUE(all_hold(t, f.assertions, builtin.get_value(f.symbols)));
      ASSERT_TRUE(all_hold(t, f.assertions, oracle.get_value(f.symbols)));
    } else {
      ++unsat;
    }
  }
  EXPECT_GT(sat, 100);
  EXPECT_GT(unsat, 100);
}

TEST(Backend, LearningDisabledGivesSameVerdicts)
{
  // Without learning the search is plain DPLL, so keep the circuits small.
  TermTable t;
  gen::FormulaShape shape;
  shape.max_width = 4;
  shape.max_free_bits = 12;
  gen::FormulaGenerator gen(t, 31, shape);
  for (int i = 0; i < 200; ++i) {
    const auto f = gen.next();
    BuiltinBackend with(t);
    BuiltinBackend without(t, BuiltinOptions{ sat::SolverOptions{ false, false, 0 }, false });
    for (Term a : f.assertions) {
      with.assert_term(a);
      without.assert_term(a);
    }
    ASSERT_EQ(with.check_sat(), without.check_sat());
  }
}

TEST(Backend, PigeonholeThroughTerms)
{
  // Four distinct 2-bit values do not fit in three: every pair differs and all are below 3.
  TermTable t;
  BuiltinBackend builtin(t);
  OracleBackend oracle(t);
  std::vector<Term> p;
  for (int i = 0; i < 4; ++i) p.push_back(t.mk_symbol("p" + std::to_string(i), Sort::bv(2)));
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (Backend *b : { static_cast<Backend *>(&builtin), static_cast<Backend *>(&oracle) }) {
      b->assert_term(t.bvult(p[i], t.mk_const(2, 3)));
      for (std::size_t j = i + 1; j < p.size(); ++j) b->assert_term(t.not_(t.eq(p[i], p[j])));
    }
  }
  EXPECT_EQ(builtin.check_sat(), Result::Unsat);
  EXPECT_EQ(oracle.check_sat(), Result::Unsat);
}

TEST(Backend, OracleCapacity)
{
  TermTable t;
  OracleBackend oracle(t, 8);
  const Term x = t.mk_symbol("x", Sort::bv(16));
  oracle.assert_term(t.eq(x, x));
  EXPECT_THROW(oracle.check_sat(), OracleCapacityError);
}

TEST(Backend, DimacsDump)
{
  TermTable t;
  BuiltinBackend b(t, BuiltinOptions{ {}, true });
  const Term x = t.mk_symbol("x", Sort::bv(3));
  b.assert_term(t.eq(t.bvadd(x, x), t.mk_const(3, 2)));
  const std::string d = b.dimacs();
  EXPECT_TRUE(d.starts_with("p cnf "));
  EXPECT_NE(d.find(" 0\n"), std::string::npos);
}

TEST(Backend, ExternalProcessFailures)
{
  TermTable t;
  EXPECT_THROW(ExternalBackend(t, ExternalConfig{ "/nonexistent/solver", {} }), BackendProtocolError);
  // A process that never answers: check-sat times out to unknown.
  ExternalBackend sleeper(t, ExternalConfig{ "sleep", { "30" } });
  sleeper.assert_term(t.mk_true());
  EXPECT_EQ(sleeper.check_sat(Deadline::after(0.3)), Result::Unknown);
}

TEST(Backend, ExternalReferenceSolverCrossCheck)
{
  if (!std::filesystem::exists("/usr/local/bin/z3")) GTEST_SKIP() << "no reference solver installed";
  TermTable t;
  gen::FormulaGenerator gen(t, 4242);
  for (int i = 0; i < 40; ++i) {
    const auto f = gen.next();
    ExternalBackend z3(t, ExternalConfig{ "/usr/local/bin/z3", { "-in" } });
    OracleBackend oracle(t);
    for (Term a : f.assertions) {
      z3.assert_term(a);
      oracle.assert_term(a);
    }
    const Result r = z3.check_sat();
    ASSERT_EQ(r, oracle.check_sat()) << z3.transcript();
    if (r == Result::Sat) {
      ASSERT_TRUE(all_hold(t, f.assertions, z3.get_value(f.symbols)));
    }
  }
}
