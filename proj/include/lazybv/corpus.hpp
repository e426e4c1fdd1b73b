#ifndef LAZYBV_CORPUS_HPP
#define LAZYBV_CORPUS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace lazybv {

struct CorpusOptions
{
  std::uint64_t seed = 1;
  /// Instances attempted per family; ones whose status cannot be settled are dropped.
  unsigned per_family = 8;
  unsigned min_width = 4;
  unsigned max_width = 16;
  /// Instances with at most this many free bits are settled by the oracle.
  unsigned oracle_bits = 24;
  /// Budget for settling larger instances with the builtin baseline.
  double baseline_timeout = 60;
};

struct CorpusEntry
{
  /// File name, `<family>_<width>_<n>.smt2`.
  std::string name;
  std::string family;
  /// "sat" or "unsat".
  std::string status;
  /// "oracle" or "baseline".
  std::string settled_by;
  std::string text;
};

/**
 * Deterministic benchmark families: random equalities and disequalities over
 * mul/div/rem, commutativity and distributivity contradictions, power-of-two
 * products, squares, and the division identity. Each text carries its status
 * in (set-info :status ...).
 */
std::vector<CorpusEntry> generate_corpus(const CorpusOptions &options);

}// namespace lazybv

#endif
