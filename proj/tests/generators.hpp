#ifndef LAZYBV_TESTS_GENERATORS_HPP
#define LAZYBV_TESTS_GENERATORS_HPP

#include "lazybv/sat.hpp"
#include "lazybv/term.hpp"

#include <random>
#include <string>
#include <vector>

namespace lazybv::gen {

struct FormulaShape
{
  unsigned min_width = 2;
  unsigned max_width = 6;
  unsigned max_vars = 4;
  /// Upper bound on width * variables, keeps the oracle cheap.
  unsigned max_free_bits = 20;
  unsigned max_depth = 3;
  unsigned max_atoms = 3;
};

struct GeneratedFormula
{
  std::vector<Term> symbols;
  std::vector<Term> assertions;
  unsigned width = 0;
};

/// Random QF_BV conjunction that contains at least one mul/div/rem application.
class FormulaGenerator
{
public:
  FormulaGenerator(TermTable &table, std::uint64_t seed, FormulaShape shape = {}) : table_(table), rng_(seed), shape_(shape) {}

  GeneratedFormula next()
  {
    GeneratedFormula f;
    f.width = pick(shape_.min_width, shape_.max_width);
    const unsigned nvars = pick(1, std::min(shape_.max_vars, std::max(1u, shape_.max_free_bits / f.width)));
    for (unsigned i = 0; i < nvars; ++i)
      f.symbols.push_back(table_.mk_symbol(table_.fresh_name("v"), Sort::bv(f.width)));
    symbols_ = f.symbols;
    width_ = f.width;
    const unsigned atoms = pick(1, shape_.max_atoms);
    for (unsigned i = 0; i < atoms; ++i) f.assertions.push_back(atom(i == 0));
    return f;
  }

  Term term(unsigned depth)
  {
    if (depth == 0 || chance(0.25)) return leaf();
    static constexpr Kind binary[] = { Kind::BvMul, Kind::BvMul, Kind::BvUdiv, Kind::BvSdiv, Kind::BvUrem, Kind::BvSrem, Kind::BvAdd,
      Kind::BvSub, Kind::BvAnd, Kind::BvOr, Kind::BvXor, Kind::BvShl, Kind::BvLshr, Kind::BvAshr };
    const unsigned r = pick(0, 9);
    if (r == 0) return table_.bvneg(term(depth - 1));
    if (r == 1) return table_.bvnot(term(depth - 1));
    if (r == 2) return table_.ite(atom(false, depth - 1), term(depth - 1), term(depth - 1));
    return table_.mk(binary[pick(0, std::size(binary) - 1)], { term(depth - 1), term(depth - 1) });
  }

private:
  Term atom(bool force_abstracted, unsigned depth = 0)
  {
    if (depth == 0) depth = shape_.max_depth;
    Term lhs = term(depth);
    if (force_abstracted) {
      static constexpr Kind ops[] = { Kind::BvMul, Kind::BvMul, Kind::BvMul, Kind::BvUdiv, Kind::BvSdiv, Kind::BvUrem, Kind::BvSrem };
      lhs = table_.mk(ops[pick(0, std::size(ops) - 1)], { term(depth - 1), term(depth - 1) });
    }
    const Term rhs = chance(0.5) ? constant() : term(depth - 1);
    switch (pick(0, 6)) {
    case 0:
    case 1: return table_.eq(lhs, rhs);
    case 2: return table_.not_(table_.eq(lhs, rhs));
    case 3: return table_.bvult(lhs, rhs);
    case 4: return table_.bvule(lhs, rhs);
    case 5: return table_.bvslt(lhs, rhs);
    default: return table_.bvsle(lhs, rhs);
    }
  }

  Term leaf()
  {
    if (chance(0.7)) return symbols_[pick(0, static_cast<unsigned>(symbols_.size()) - 1)];
    return constant();
  }

  Term constant()
  {
    const std::uint64_t mask = width_ >= 64 ? ~0ULL : (1ULL << width_) - 1;
    return table_.mk_const(width_, rng_() & mask);
  }

  unsigned pick(unsigned lo, unsigned hi) { return std::uniform_int_distribution<unsigned>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  TermTable &table_;
  std::mt19937_64 rng_;
  FormulaShape shape_;
  std::vector<Term> symbols_;
  unsigned width_ = 0;
};

/// Brute-force satisfiability by enumerating all assignments.
inline bool brute_force_sat(const sat::CnfFormula &f)
{
  if (f.has_empty_clause) return false;
  const std::uint64_t total = 1ULL << f.num_vars;
  for (std::uint64_t a = 0; a < total; ++a) {
    bool all = true;
    for (const auto &c : f.clauses) {
      bool sat = false;
      for (sat::Lit l : c) {
        const bool v = ((a >> (std::abs(l) - 1)) & 1) != 0;
        if (v == (l > 0)) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

inline bool satisfies(const sat::CnfFormula &f, const std::vector<bool> &assignment)
{
  for (const auto &c : f.clauses) {
    bool sat = false;
    for (sat::Lit l : c)
      if (assignment.at(static_cast<std::size_t>(std::abs(l))) == (l > 0)) sat = true;
    if (!sat) return false;
  }
  return true;
}

inline sat::CnfFormula random_kcnf(std::mt19937_64 &rng, int vars, int clauses, int k)
{
  sat::CnfFormula f;
  f.num_vars = vars;
  std::uniform_int_distribution<int> var(1, vars);
  std::bernoulli_distribution sign(0.5);
  for (int i = 0; i < clauses; ++i) {
    std::vector<sat::Lit> c;
    for (int j = 0; j < k; ++j) c.push_back(sign(rng) ? var(rng) : -var(rng));
    f.add_clause(c);
  }
  return f;
}

}// namespace lazybv::gen

#endif
