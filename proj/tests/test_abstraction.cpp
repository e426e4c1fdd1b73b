#include "lazybv/abstraction.hpp"
#include "lazybv/backend.hpp"
#include "lazybv/errors.hpp"
#include "lazybv/refinement.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace lazybv;

namespace {

struct Ops
{
  TermTable t;
  Term x;
  Term y;
  unsigned w;

  explicit Ops(unsigned width) : w(width)
  {
    x = t.mk_symbol("x", Sort::bv(w));
    y = t.mk_symbol("y", Sort::bv(w));
  }

  Model at(std::uint64_t a, std::uint64_t b) const
  {
    Model m;
    m.set(x, BvValue::from_u64(w, a));
    m.set(y, BvValue::from_u64(w, b));
    return m;
  }
};

bool contains(const std::vector<Term> &cs, Term c) { return std::find(cs.begin(), cs.end(), c) != cs.end(); }

std::int64_t to_signed(std::uint64_t v, unsigned w) { return v >= (1ULL << (w - 1)) ? static_cast<std::int64_t>(v) - (1LL << w) : static_cast<std::int64_t>(v); }

// Every stage's constraints, emitted once symbolically; FullInterval for every index.
std::vector<Term> all_stage_constraints(AbstractionEngine &e, std::size_t id)
{
  std::vector<Term> cs;
  auto take = [&](const StageOutput &o) { cs.insert(cs.end(), o.constraints.begin(), o.constraints.end()); };
  const AbstractionInstance inst = e.instances()[id];
  if (inst.op == OpKind::Mul) {
    take(e.mul_stage_simple(id));
    take(e.mul_stage_intervals(id));
    take(e.mul_stage_relations(id));
    for (unsigned i = 0; i < inst.width; ++i) take(e.mul_stage_full_interval(id, BvValue::power_of_two(inst.width, i)));
  } else {
    take(e.div_stage_relations(id));
    take(e.op_stage_full(id));
  }
  return cs;
}

}// namespace

TEST(Abstraction, NoovExamples)
{
  Ops s(4);
  AbstractionEngine e(s.t, SchemeConfig::full());
  const Term n = e.noov(s.x, s.y);
  EXPECT_TRUE(std::get<bool>(eval(s.t, n, s.at(1, 3))));
  EXPECT_TRUE(std::get<bool>(eval(s.t, n, s.at(1, 0b1101))));// 1 * -3
  // 2 * 3 fits, but leading-zero counts (2 + 2) cannot tell it from 3 * 3; noov is conservative.
  EXPECT_FALSE(std::get<bool>(eval(s.t, n, s.at(2, 3))));
  EXPECT_FALSE(std::get<bool>(eval(s.t, n, s.at(7, 7))));
  for (std::uint64_t b = 0; b < 16; ++b) EXPECT_TRUE(std::get<bool>(eval(s.t, n, s.at(0, b))));
}

TEST(Abstraction, NoovContractExhaustive)
{
  for (unsigned w = 1; w <= 6; ++w) {
    Ops s(w);
    AbstractionEngine e(s.t, SchemeConfig::full());
    const Term n = e.noov(s.x, s.y);
    const std::int64_t lo = -(1LL << (w - 1));
    const std::int64_t hi = (1LL << (w - 1)) - 1;
    unsigned certified = 0;
    for (std::uint64_t a = 0; a < (1ULL << w); ++a) {
      for (std::uint64_t b = 0; b < (1ULL << w); ++b) {
        if (!std::get<bool>(eval(s.t, n, s.at(a, b)))) continue;
        ++certified;
        const std::int64_t p = to_signed(a, w) * to_signed(b, w);
        ASSERT_TRUE(p >= lo && p <= hi) << "w=" << w << " a=" << a << " b=" << b;
      }
    }
    EXPECT_GT(certified, 2 * (1u << w) - 2);
  }
}

TEST(Abstraction, HbsExamplesAndPartition)
{
  Ops s(4);
  AbstractionEngine e(s.t, SchemeConfig::full());
  auto hbs_at = [&](std::uint64_t v, unsigned i) { return std::get<bool>(eval(s.t, e.hbs(s.x, i), s.at(v, 0))); };
  EXPECT_TRUE(hbs_at(0b0100, 2));
  EXPECT_FALSE(hbs_at(0b0100, 3));
  EXPECT_FALSE(hbs_at(0b0100, 1));
  EXPECT_FALSE(hbs_at(0b0100, 0));
  EXPECT_TRUE(hbs_at(0b0101, 2));
  for (std::uint64_t v = 0; v < 16; ++v) {
    unsigned hits = 0;
    for (unsigned i = 0; i < 4; ++i) hits += hbs_at(v, i) ? 1 : 0;
    EXPECT_EQ(hits, v == 0 ? 0u : 1u);
  }
}

TEST(Abstraction, UnrolledBoundsMatchShifts)
{
  TermTable t;
  const Term a = t.mk_symbol("a", Sort::bv(8));
  const Term b = t.mk_symbol("b", Sort::bv(8));
  AbstractionEngine e(t, SchemeConfig::full());
  const Term lo = e.lower_bound(a, b, 7);
  const Term hi = e.upper_bound(a, b, 7);
  for (std::uint64_t av = 1; av < 256; ++av) {
    const int i = BvValue::from_u64(8, av).highest_set_bit();
    for (std::uint64_t bv = 0; bv < 256; ++bv) {
      Model m;
      m.set(a, BvValue::from_u64(8, av));
      m.set(b, BvValue::from_u64(8, bv));
      ASSERT_EQ(std::get<BvValue>(eval(t, lo, m)).to_u64(), (bv << i) & 0xff);
      ASSERT_EQ(std::get<BvValue>(eval(t, hi, m)).to_u64(), (bv << (i + 1)) & 0xff);
    }
  }
}

TEST(Abstraction, IntervalBoundExample)
{
  // x = 5 has its highest set bit at 2, so 3 * 4 <= r2p < 3 * 8 and the exact 15 fits.
  Ops s(4);
  AbstractionEngine e(s.t, SchemeConfig::full());
  const std::size_t id = e.instance_for(OpKind::Mul, s.x, s.y, 0);
  const auto inst = e.instances()[id];
  const Model m = extend_exactly(e, s.t, s.at(5, 3));
  EXPECT_EQ(std::get<BvValue>(eval(s.t, e.lower_bound(inst.x2p, inst.y2p, 3), m)).to_u64(), 12u);
  EXPECT_EQ(std::get<BvValue>(eval(s.t, e.upper_bound(inst.x2p, inst.y2p, 3), m)).to_u64(), 24u);
  EXPECT_EQ(std::get<BvValue>(*m.find(inst.r2p)).to_u64(), 15u);
}

TEST(Abstraction, SimpleStageContents)
{
  Ops s(4);
  AbstractionEngine e(s.t, SchemeConfig::full());
  const std::size_t id = e.instance_for(OpKind::Mul, s.x, s.y, 0);
  const auto out = e.mul_stage_simple(id);
  const auto inst = e.instances()[id];
  auto &t = s.t;
  EXPECT_TRUE(contains(out.constraints, t.implies(t.eq(s.x, t.mk_const(4, 0)), t.eq(inst.ap, t.mk_const(4, 0)))));
  EXPECT_TRUE(contains(out.constraints, t.implies(t.eq(s.y, t.mk_const(4, 15)), t.eq(inst.ap, t.bvneg(s.x)))));
  const Term pow2 = t.and_({ t.not_(t.bit(s.x, 0)), t.not_(t.bit(s.x, 1)), t.bit(s.x, 2), t.not_(t.bit(s.x, 3)) });
  EXPECT_TRUE(contains(out.constraints, t.implies(pow2, t.eq(inst.r2p, t.bvshl(inst.y2p, t.mk_const(8, 2))))));
  // Definitions come with the first stage only.
  EXPECT_TRUE(contains(out.constraints, t.eq(inst.ap, t.extract(3, 0, inst.r2))));
  EXPECT_FALSE(contains(e.mul_stage_intervals(id).constraints, t.eq(inst.ap, t.extract(3, 0, inst.r2))));
}

TEST(Abstraction, RelationStageContents)
{
  Ops s(4);
  AbstractionEngine e(s.t, SchemeConfig::full());
  const std::size_t id = e.instance_for(OpKind::Mul, s.x, s.y, 0);
  const auto out = e.mul_stage_relations(id);
  const auto inst = e.instances()[id];
  auto &t = s.t;
  ASSERT_FALSE(out.spawned.empty());
  const Term commuted = e.instances()[e.instance_for(OpKind::Mul, inst.y2, inst.x2, 1)].ap;
  EXPECT_TRUE(contains(out.constraints, t.eq(inst.r2, commuted)));
  const Term q = e.instances()[e.instance_for(OpKind::Sdiv, inst.r2, inst.x2, 1)].ap;
  EXPECT_TRUE(contains(out.constraints, t.or_({ t.eq(inst.x2, t.mk_const(8, 0)), t.eq(inst.y2, q) })));
  for (std::size_t sp : out.spawned) EXPECT_EQ(e.instances()[sp].cursor, 0u);
}

TEST(Abstraction, SremRelationContents)
{
  Ops s(4);
  AbstractionEngine e(s.t, SchemeConfig::full());
  const std::size_t id = e.instance_for(OpKind::Srem, s.x, s.y, 0);
  const auto out = e.div_stage_relations(id);
  const auto inst = e.instances()[id];
  auto &t = s.t;
  const Term q2 = e.instances()[e.instance_for(OpKind::Sdiv, inst.x2, inst.y2, 1)].ap;
  const Term r2 = e.instances()[e.instance_for(OpKind::Srem, inst.x2, inst.y2, 1)].ap;
  const Term m = e.instances()[e.instance_for(OpKind::Mul, q2, inst.y2, 1)].ap;
  EXPECT_TRUE(contains(out.constraints, t.eq(inst.x2, t.bvadd(m, r2))));
  EXPECT_TRUE(contains(out.constraints, t.eq(inst.ap, t.extract(3, 0, r2))));
  EXPECT_EQ(out.spawned.size(), 3u);
  const auto full = e.op_stage_full(id);
  EXPECT_TRUE(contains(full.constraints, t.eq(inst.ap, t.bvsrem(s.x, s.y))));
  EXPECT_TRUE(e.instances()[id].exhausted);
}

TEST(Abstraction, WideSremSlicesToNarrowSrem)
{
  for (std::uint64_t a = 0; a < 16; ++a) {
    for (std::uint64_t b = 0; b < 16; ++b) {
      const BvValue x = BvValue::from_u64(4, a);
      const BvValue y = BvValue::from_u64(4, b);
      ASSERT_EQ(x.sext(4).srem(y.sext(4)).extract(3, 0), x.srem(y));
      ASSERT_EQ(x.sext(4).sdiv(y.sext(4)).extract(3, 0), x.sdiv(y));
      ASSERT_EQ(x.zext(4).urem(y.zext(4)).extract(3, 0), x.urem(y));
      ASSERT_EQ(x.zext(4).udiv(y.zext(4)).extract(3, 0), x.udiv(y));
    }
  }
}

TEST(Abstraction, EveryStageIsCompleteExhaustively)
{
  for (unsigned w : { 3u, 4u }) {
    for (OpKind op : { OpKind::Mul, OpKind::Sdiv, OpKind::Udiv, OpKind::Srem, OpKind::Urem }) {
      Ops s(w);
      // Extra context widths make the relation stage emit slicing identities.
      const Term z = s.t.mk_symbol("z", Sort::bv(2 * w + 1));
      std::vector<Term> input{ s.t.eq(s.t.mk(native_kind(op), { s.x, s.y }), s.t.extract(w - 1, 0, z)), s.t.bvult(s.t.extract(1, 0, z), s.t.mk_const(2, 3)) };
      AbstractionEngine e(s.t, SchemeConfig::full());
      e.abstract_formula(input);
      const std::vector<Term> cs = all_stage_constraints(e, 0);
      for (std::uint64_t a = 0; a < (1ULL << w); ++a) {
        for (std::uint64_t b = 0; b < (1ULL << w); ++b) {
          Model m = s.at(a, b);
          m.set(z, BvValue::from_u64(2 * w + 1, 0));
          m = extend_exactly(e, s.t, m);
          Evaluator ev(s.t, m);
          for (Term c : cs) ASSERT_TRUE(ev.eval_bool(c)) << to_string(op) << " w=" << w << " a=" << a << " b=" << b;
        }
      }
    }
  }
}

TEST(Abstraction, ExhaustedSchemeIsSound)
{
  constexpr unsigned w = 3;
  for (OpKind op : { OpKind::Mul, OpKind::Sdiv, OpKind::Udiv, OpKind::Srem, OpKind::Urem }) {
    for (std::uint64_t a = 0; a < 8; ++a) {
      for (std::uint64_t b = 0; b < 8; ++b) {
        Ops s(w);
        AbstractionEngine e(s.t, SchemeConfig::full());
        const std::size_t id = e.instance_for(op, s.x, s.y, 0);
        const std::vector<Term> cs = all_stage_constraints(e, id);
        const Term ap = e.instances()[id].ap;
        const BvValue exact = std::get<BvValue>(eval(s.t, s.t.mk(native_kind(op), { s.x, s.y }), s.at(a, b)));
        OracleBackend oracle(s.t, 64);
        oracle.assert_term(s.t.eq(s.x, s.t.mk_const(w, a)));
        oracle.assert_term(s.t.eq(s.y, s.t.mk_const(w, b)));
        oracle.assert_term(s.t.not_(s.t.eq(ap, s.t.mk_const(exact))));
        for (Term c : cs) oracle.assert_term(c);
        ASSERT_EQ(oracle.check_sat(), Result::Unsat) << to_string(op) << " " << a << " " << b;
      }
    }
  }
}

TEST(Abstraction, FullIntervalStage)
{
  Ops s(4);
  AbstractionEngine e(s.t, SchemeConfig::full());
  const std::size_t id = e.instance_for(OpKind::Mul, s.x, s.y, 0);
  auto &t = s.t;
  const auto inst = e.instances()[id];
  auto out = e.mul_stage_full_interval(id, BvValue::from_u64(4, 0b0110));
  EXPECT_TRUE(contains(out.constraints, t.implies(e.hbs(s.x, 2), t.eq(inst.ap, t.bvmul(s.x, s.y)))));
  EXPECT_TRUE(e.instances()[id].hbs_indices.contains(2));
  const auto zero = e.mul_stage_full_interval(id, BvValue::from_u64(4, 0));
  EXPECT_TRUE(zero.constraints.empty());
  EXPECT_EQ(e.instances()[id].hbs_indices.size(), 1u);
  EXPECT_THROW(e.mul_stage_full_interval(id, BvValue::from_u64(4, 0b0111)), IndexAlreadyAssertedError);
  for (std::uint64_t v : { 1, 2, 8 }) e.mul_stage_full_interval(id, BvValue::from_u64(4, v));
  EXPECT_TRUE(e.instances()[id].exhausted);
  EXPECT_EQ(e.instances()[id].full_interval_refinements, 4u);
}

TEST(Abstraction, NextRefinementFollowsStepOrder)
{
  auto run = [](const SchemeConfig &cfg) {
    Ops s(4);
    AbstractionEngine e(s.t, cfg);
    const std::size_t id = e.instance_for(OpKind::Mul, s.x, s.y, 0);
    std::vector<std::size_t> sizes;
    for (int i = 0; i < 3; ++i) sizes.push_back(e.next_refinement(id, BvValue::from_u64(4, 1u << i))->constraints.size());
    return sizes;
  };
  Ops s(4);
  AbstractionEngine probe(s.t, SchemeConfig::full());
  const std::size_t id = probe.instance_for(OpKind::Mul, s.x, s.y, 0);
  const std::size_t simple = probe.mul_stage_simple(id).constraints.size();
  const std::size_t intervals = probe.mul_stage_intervals(id).constraints.size();
  const std::size_t relations = probe.mul_stage_relations(id).constraints.size();

  const auto full = run(SchemeConfig::full());
  EXPECT_EQ(full, (std::vector<std::size_t>{ simple, intervals, relations }));
  const auto omit = run(SchemeConfig::omit_step(2));
  EXPECT_EQ(omit[0], simple);
  EXPECT_EQ(omit[1], relations);
  EXPECT_EQ(omit[2], 1u);// one full-interval constraint
  const auto merged = run(SchemeConfig::merge_steps(2));
  EXPECT_EQ(merged[1], intervals + relations);
}

TEST(Abstraction, FullIntervalRepeatsUntilExhausted)
{
  Ops s(3);
  AbstractionEngine e(s.t, SchemeConfig::full());
  const std::size_t id = e.instance_for(OpKind::Mul, s.x, s.y, 0);
  for (int i = 0; i < 3; ++i) ASSERT_TRUE(e.next_refinement(id, BvValue::from_u64(3, 1)).has_value());
  for (unsigned i = 0; i < 3; ++i) ASSERT_TRUE(e.next_refinement(id, BvValue::power_of_two(3, i)).has_value());
  EXPECT_TRUE(e.instances()[id].exhausted);
  EXPECT_FALSE(e.next_refinement(id, BvValue::from_u64(3, 1)).has_value());
  EXPECT_EQ(e.instances()[id].refinements, 6u);
}

TEST(Abstraction, AbstractFormula)
{
  Ops s(4);
  auto &t = s.t;
  const Term z = t.mk_symbol("z", Sort::bv(4));
  AbstractionEngine e(t, SchemeConfig::full());
  const Term m = t.bvmul(s.x, s.y);
  const std::vector<Term> in{ t.eq(m, z), t.bvult(m, t.bvadd(m, z)) };
  const auto out = e.abstract_formula(in);
  ASSERT_EQ(e.instances().size(), 1u);
  const Term ap = e.instances()[0].ap;
  EXPECT_EQ(out[0], t.eq(ap, z));
  EXPECT_EQ(out[1], t.bvult(ap, t.bvadd(ap, z)));

  AbstractionEngine plain(t, SchemeConfig::full());
  const std::vector<Term> none{ t.eq(t.bvadd(s.x, s.y), z) };
  EXPECT_EQ(plain.abstract_formula(none), none);
  EXPECT_TRUE(plain.instances().empty());

  AbstractionEngine folded(t, SchemeConfig::full());
  const std::vector<Term> consts{ t.eq(t.bvmul(t.mk_const(4, 3), t.mk_const(4, 7)), z) };
  EXPECT_EQ(folded.abstract_formula(consts)[0], t.eq(t.mk_const(4, 5), z));
  EXPECT_TRUE(folded.instances().empty());
}

TEST(Abstraction, RewriteUnsignedRegistersOnlyUnsignedInstances)
{
  Ops s(4);
  auto &t = s.t;
  SchemeConfig cfg = SchemeConfig::full();
  cfg.signed_mode = SignedMode::RewriteUnsigned;
  AbstractionEngine e(t, cfg);
  const Term z = t.mk_symbol("z", Sort::bv(4));
  const std::vector<Term> in{ t.eq(t.bvsdiv(s.x, s.y), z), t.eq(t.bvsrem(s.y, s.x), z) };
  const auto out = e.abstract_formula(in);
  ASSERT_FALSE(e.instances().empty());
  for (const auto &inst : e.instances()) EXPECT_TRUE(inst.op == OpKind::Udiv || inst.op == OpKind::Urem);
  // The decomposition is exact once every unsigned ap carries its exact value.
  for (std::uint64_t a = 0; a < 16; ++a) {
    for (std::uint64_t b = 0; b < 16; ++b) {
      Model m = s.at(a, b);
      m.set(z, BvValue::from_u64(4, 0));
      const Model ext = extend_exactly(e, t, m);
      for (std::size_t i = 0; i < in.size(); ++i) {
        const Term lhs_in = t.node(in[i]).children[0];
        const Term lhs_out = t.node(out[i]).children[0];
        ASSERT_EQ(eval(t, lhs_in, m), eval(t, lhs_out, ext)) << a << " " << b;
      }
    }
  }
}

TEST(Abstraction, PerApplicationSymbolsAreUnique)
{
  Ops s(4);
  auto &t = s.t;
  AbstractionEngine e(t, SchemeConfig::full());
  const std::vector<Term> in{ t.eq(t.bvmul(s.x, s.y), t.bvmul(s.y, s.x)), t.eq(t.bvsrem(s.x, s.y), t.bvudiv(s.y, s.x)) };
  e.abstract_formula(in);
  for (std::size_t i = 0; i < e.instances().size(); ++i) e.next_refinement(i, BvValue::from_u64(4, 1));
  std::set<Term> seen;
  for (const auto &inst : e.instances()) {
    EXPECT_TRUE(seen.insert(inst.ap).second);
    if (inst.op == OpKind::Mul) {
      EXPECT_TRUE(seen.insert(inst.r2p).second);
    }
  }
}

TEST(Abstraction, SchemeConfigValidation)
{
  SchemeConfig bad = SchemeConfig::full();
  bad.mul_steps = { { Stage::FullInterval }, { Stage::Simple } };
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad.mul_steps = { { Stage::Simple, Stage::Simple } };
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = SchemeConfig::full();
  bad.div_steps = { { Stage::Intervals }, { Stage::Full } };
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  EXPECT_TRUE(SchemeConfig::full().sound());
  EXPECT_TRUE(SchemeConfig::omit_step(2).sound());
  EXPECT_TRUE(SchemeConfig::merge_steps(2).sound());
  EXPECT_FALSE(SchemeConfig::prefix(3).sound());
  for (const auto &name : variant_names()) EXPECT_NO_THROW(variant_config(name).validate());
}
