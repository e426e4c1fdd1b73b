#ifndef LAZYBV_BITBLAST_HPP
#define LAZYBV_BITBLAST_HPP

#include "lazybv/sat.hpp"
#include "lazybv/term.hpp"

#include <functional>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lazybv {

using Bits = std::vector<sat::Lit>;

/**
 * Tseitin translation of terms into clauses of a sink.
 *
 * Encodings are memoized per term, so blasting terms one at a time into an
 * incremental solver reuses all shared structure. Bit 0 is the least
 * significant. Gates fold constant inputs, so constant operands shrink the
 * circuits instead of producing dead clauses.
 */
class BitBlaster
{
public:
  BitBlaster(const TermTable &table, sat::ClauseSink &sink);

  sat::Lit blast_bool(Term t);
  const Bits &blast_bv(Term t);
  /// Adds the unit clause for a Bool term.
  void assert_term(Term t);

  /// Encoding of an already blasted term, or nullptr.
  [[nodiscard]] const Bits *find_bits(Term t) const;
  [[nodiscard]] std::optional<sat::Lit> find_lit(Term t) const;
  [[nodiscard]] sat::Lit true_lit() const { return true_; }

  // Circuit builders, public for tests.
  sat::Lit and2(sat::Lit a, sat::Lit b);
  sat::Lit or2(sat::Lit a, sat::Lit b) { return -and2(-a, -b); }
  sat::Lit xor2(sat::Lit a, sat::Lit b);
  sat::Lit ite(sat::Lit c, sat::Lit t, sat::Lit e);
  sat::Lit and_all(const std::vector<sat::Lit> &xs);
  sat::Lit equal(const Bits &a, const Bits &b);
  Bits add(const Bits &a, const Bits &b, sat::Lit carry_in);
  Bits neg(const Bits &a);
  Bits mul(const Bits &a, const Bits &b);
  sat::Lit ult(const Bits &a, const Bits &b);
  sat::Lit slt(const Bits &a, const Bits &b);
  /// Unsigned quotient and remainder with the SMT-LIB zero-divisor results.
  std::pair<Bits, Bits> udivrem(const Bits &a, const Bits &b);
  Bits shift(Kind kind, const Bits &a, const Bits &amount);

private:
  void blast(Term root);
  void encode(Term t);
  sat::Lit fresh() { return sink_.new_var(); }
  [[nodiscard]] bool is_const(sat::Lit l) const { return l == true_ || l == -true_; }

  const TermTable &table_;
  sat::ClauseSink &sink_;
  sat::Lit true_;
  std::unordered_map<Term, sat::Lit> bools_;
  std::unordered_map<Term, Bits> bits_;
  std::map<std::pair<Bits, Bits>, std::pair<Bits, Bits>> divrem_cache_;
};

/// Reads a bit-vector back from a literal valuation.
BvValue read_bits(const Bits &bits, const std::function<bool(sat::Lit)> &value);

}// namespace lazybv

#endif
