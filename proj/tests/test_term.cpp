#include "lazybv/errors.hpp"
#include "lazybv/term.hpp"

#include <gtest/gtest.h>

using namespace lazybv;

namespace {

std::int64_t to_signed(std::uint64_t v, unsigned w) { return v >= (1ULL << (w - 1)) ? static_cast<std::int64_t>(v) - (1LL << w) : static_cast<std::int64_t>(v); }

struct Fixture
{
  TermTable t;
  Term x8 = t.mk_symbol("x", Sort::bv(8));
  Term y8 = t.mk_symbol("y", Sort::bv(8));
};

}// namespace

TEST(Term, HashConsing)
{
  Fixture f;
  EXPECT_EQ(f.t.mk(Kind::BvAdd, { f.x8, f.y8 }), f.t.mk(Kind::BvAdd, { f.x8, f.y8 }));
  EXPECT_NE(f.t.bvadd(f.x8, f.y8), f.t.bvadd(f.y8, f.x8));
  EXPECT_EQ(f.t.mk_const(8, 3), f.t.mk_const(8, 3));
  EXPECT_NE(f.t.mk_const(8, 3), f.t.mk_const(4, 3));
  EXPECT_EQ(f.t.mk_symbol("x", Sort::bv(8)), f.x8);
}

TEST(Term, IndependentlyBuiltStructuresShareIds)
{
  TermTable t;
  const Term a = t.mk_symbol("a", Sort::bv(4));
  auto build = [&] { return t.eq(t.bvmul(t.extract(3, 0, t.zext(a, 4)), t.mk_const(4, 3)), t.bvneg(a)); };
  EXPECT_EQ(build(), build());
}

TEST(Term, SortChecking)
{
  Fixture f;
  EXPECT_EQ(f.t.sort(f.t.extract(3, 0, f.x8)), Sort::bv(4));
  EXPECT_EQ(f.t.width(f.t.concat(f.x8, f.y8)), 16u);
  EXPECT_EQ(f.t.width(f.t.sext(f.x8, 3)), 11u);
  const Term b = f.t.mk_symbol("b", Sort::boolean());
  EXPECT_THROW(f.t.eq(f.x8, b), SortError);
  EXPECT_THROW(f.t.bvadd(f.x8, f.t.mk_const(4, 1)), SortError);
  EXPECT_THROW(f.t.not_(f.x8), SortError);
  EXPECT_THROW(f.t.extract(2, 3, f.x8), InvalidAttrError);
  EXPECT_THROW(f.t.extract(8, 0, f.x8), InvalidAttrError);
  EXPECT_THROW(f.t.mk_symbol("x", Sort::bv(4)), SortError);
}

TEST(Term, BoolAndWidthOneAreDistinct)
{
  TermTable t;
  const Term b = t.mk_symbol("b", Sort::boolean());
  const Term v = t.mk_symbol("v", Sort::bv(1));
  EXPECT_THROW(t.eq(b, v), SortError);
  EXPECT_EQ(t.sort(t.bit(v, 0)), Sort::boolean());
}

TEST(Term, EvalExamples)
{
  TermTable t;
  const Term x = t.mk_symbol("x", Sort::bv(4));
  const Term y = t.mk_symbol("y", Sort::bv(4));
  auto at = [&](Term e, std::uint64_t a, std::uint64_t b) {
    Model m;
    m.set(x, BvValue::from_u64(4, a));
    m.set(y, BvValue::from_u64(4, b));
    return std::get<BvValue>(eval(t, e, m)).to_u64();
  };
  EXPECT_EQ(at(t.bvmul(x, y), 3, 5), 15u);
  EXPECT_EQ(at(t.bvmul(x, y), 8, 2), 0u);
  EXPECT_EQ(at(t.bvsdiv(x, y), 0b1001, 0b0010), 0b1101u);
  EXPECT_EQ(at(t.bvudiv(x, y), 5, 0), 0b1111u);
  EXPECT_EQ(at(t.bvsrem(x, y), 0b1001, 2), 0b1111u);
}

TEST(Term, EvalUnboundSymbol)
{
  TermTable t;
  const Term x = t.mk_symbol("x", Sort::bv(4));
  EXPECT_THROW(eval(t, t.bvadd(x, x), Model{}), UnboundSymbolError);
}

TEST(Term, EvalAgreesWithIntegerReferenceExhaustively)
{
  TermTable t;
  for (unsigned w = 1; w <= 6; ++w) {
    const Term x = t.mk_symbol("x" + std::to_string(w), Sort::bv(w));
    const Term y = t.mk_symbol("y" + std::to_string(w), Sort::bv(w));
    const std::uint64_t n = 1ULL << w;
    const Term mul = t.bvmul(x, y);
    const Term add = t.bvadd(x, y);
    const Term sub = t.bvsub(x, y);
    const Term udiv = t.bvudiv(x, y);
    const Term urem = t.bvurem(x, y);
    const Term sdiv = t.bvsdiv(x, y);
    const Term srem = t.bvsrem(x, y);
    const Term slt = t.bvslt(x, y);
    const Term ule = t.bvule(x, y);
    for (std::uint64_t a = 0; a < n; ++a) {
      for (std::uint64_t b = 0; b < n; ++b) {
        Model m;
        m.set(x, BvValue::from_u64(w, a));
        m.set(y, BvValue::from_u64(w, b));
        Evaluator ev(t, m);
        const std::int64_t sa = to_signed(a, w);
        const std::int64_t sb = to_signed(b, w);
        const auto wrap = [&](std::int64_t v) { return static_cast<std::uint64_t>(v) & (n - 1); };
        ASSERT_EQ(ev.eval_bv(mul).to_u64(), a * b % n);
        ASSERT_EQ(ev.eval_bv(add).to_u64(), (a + b) % n);
        ASSERT_EQ(ev.eval_bv(sub).to_u64(), (a + n - b) % n);
        ASSERT_EQ(ev.eval_bv(udiv).to_u64(), b == 0 ? n - 1 : a / b);
        ASSERT_EQ(ev.eval_bv(urem).to_u64(), b == 0 ? a : a % b);
        ASSERT_EQ(ev.eval_bv(sdiv).to_u64(), sb == 0 ? (sa < 0 ? 1 : n - 1) : wrap(sa / sb));
        ASSERT_EQ(ev.eval_bv(srem).to_u64(), sb == 0 ? a : wrap(sa % sb));
        ASSERT_EQ(ev.eval_bool(slt), sa < sb);
        ASSERT_EQ(ev.eval_bool(ule), a <= b);
      }
    }
  }
}

TEST(Term, ExtractConcatRoundTrip)
{
  TermTable t;
  for (unsigned w = 2; w <= 6; ++w) {
    const Term x = t.mk_symbol("x" + std::to_string(w), Sort::bv(w));
    for (unsigned k = 1; k < w; ++k) {
      const Term joined = t.concat(t.extract(w - 1, k, x), t.extract(k - 1, 0, x));
      for (std::uint64_t a = 0; a < (1ULL << w); ++a) {
        Model m;
        m.set(x, BvValue::from_u64(w, a));
        ASSERT_EQ(std::get<BvValue>(eval(t, joined, m)).to_u64(), a);
      }
    }
  }
}

TEST(Term, SubstituteExamples)
{
  Fixture f;
  const Term m = f.t.bvmul(f.x8, f.y8);
  const Term ap = f.t.mk_symbol("ap", Sort::bv(8));
  EXPECT_EQ(substitute(f.t, m, { { m, ap } }), ap);
  EXPECT_EQ(substitute(f.t, f.x8, {}), f.x8);
  EXPECT_EQ(substitute(f.t, f.t.bvadd(m, m), { { m, ap } }), f.t.bvadd(ap, ap));
  // Simultaneous, not iterated: x -> y, y -> x swaps.
  EXPECT_EQ(substitute(f.t, f.t.bvsub(f.x8, f.y8), { { f.x8, f.y8 }, { f.y8, f.x8 } }), f.t.bvsub(f.y8, f.x8));
  const Term other = f.t.bvadd(f.x8, f.t.mk_const(8, 1));
  EXPECT_EQ(substitute(f.t, other, { { m, ap } }), other);
  EXPECT_THROW(substitute(f.t, m, { { f.x8, f.t.mk_const(4, 1) } }), SortError);
}

TEST(Term, CollectSymbolsAndTopologicalOrder)
{
  Fixture f;
  const Term e = f.t.eq(f.t.bvadd(f.x8, f.y8), f.x8);
  std::vector<Term> roots{ e };
  const auto syms = collect_symbols(f.t, roots);
  EXPECT_EQ(syms.size(), 2u);
  const auto order = topological_order(f.t, roots);
  ASSERT_FALSE(order.empty());
  EXPECT_EQ(order.back(), e);
}
