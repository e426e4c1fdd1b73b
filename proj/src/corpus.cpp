#include "lazybv/corpus.hpp"

#include "lazybv/backend.hpp"
#include "lazybv/smtlib.hpp"

#include <algorithm>
#include <functional>
#include <random>

namespace lazybv {

namespace {

class Builder
{
public:
  explicit Builder(std::uint64_t seed) : rng_(seed) {}

  unsigned pick(unsigned lo, unsigned hi) { return lo + static_cast<unsigned>(rng_() % (hi - lo + 1)); }
  std::uint64_t value(unsigned w) { return rng_() & (w >= 64 ? ~0ULL : (1ULL << w) - 1); }

  static std::string sort(unsigned w) { return "(_ BitVec " + std::to_string(w) + ")"; }
  static std::string lit(std::uint64_t v, unsigned w) { return "(_ bv" + std::to_string(v) + " " + std::to_string(w) + ")"; }

  std::string op()
  {
    static const char *ops[] = { "bvmul", "bvmul", "bvudiv", "bvsdiv", "bvurem", "bvsrem" };
    return ops[pick(0, 5)];
  }

private:
  std::mt19937_64 rng_;
};

struct Draft
{
  unsigned width;
  std::vector<std::string> vars;
  std::vector<std::string> assertions;
};

std::string render(const Draft &d, const std::string &status)
{
  std::string s = "(set-logic QF_BV)\n(set-info :status " + status + ")\n";
  for (const auto &v : d.vars) s += "(declare-fun " + v + " () " + Builder::sort(d.width) + ")\n";
  for (const auto &a : d.assertions) s += "(assert " + a + ")\n";
  s += "(check-sat)\n(exit)\n";
  return s;
}

using Family = std::function<Draft(Builder &, unsigned w)>;

Draft random_equality(Builder &b, unsigned w)
{
  Draft d{ w, { "x", "y" }, {} };
  d.assertions.push_back("(= (" + b.op() + " x y) " + Builder::lit(b.value(w), w) + ")");
  const std::string one = Builder::lit(1, w);
  const std::string side[] = { "(bvugt x " + one + ")", "(bvugt y " + one + ")", "(distinct x y)",
    "(bvult x " + Builder::lit(b.value(w) | 1, w) + ")" };
  for (unsigned i = 0, n = b.pick(0, 2); i < n; ++i) d.assertions.push_back(side[b.pick(0, 3)]);
  return d;
}

Draft masked_disequality(Builder &b, unsigned w)
{
  Draft d{ w, { "x", "y", "z" }, {} };
  const std::string op = b.op();
  // A full mask forces y = z, and only functional consistency refutes the disequality.
  const std::uint64_t mask = b.pick(0, 2) == 0 ? (1ULL << w) - 1 : b.value(w);
  d.assertions.push_back("(distinct (" + op + " x y) (" + op + " x z))");
  d.assertions.push_back("(= (bvand y " + Builder::lit(mask, w) + ") (bvand z " + Builder::lit(mask, w) + "))");
  return d;
}

Draft commutativity(Builder &b, unsigned w)
{
  if (b.pick(0, 1) == 0) return { w, { "x", "y" }, { "(distinct (bvmul x y) (bvmul y x))" } };
  return { w, { "x", "y", "z" }, { "(distinct (bvmul (bvmul x y) z) (bvmul z (bvmul y x)))" } };
}

Draft distributivity(Builder &, unsigned w)
{
  return { w, { "x", "y", "z" }, { "(distinct (bvmul x (bvadd y z)) (bvadd (bvmul x y) (bvmul x z)))" } };
}

Draft power_of_two(Builder &b, unsigned w)
{
  const unsigned k = b.pick(1, w - 2);
  const std::string p = Builder::lit(1ULL << k, w);
  const std::string one = Builder::lit(1, w);
  switch (b.pick(0, 2)) {
  case 0: return { w, { "x" }, { "(distinct (bvmul x " + p + ") (bvshl x " + Builder::lit(k, w) + "))" } };
  case 1: return { w, { "x", "y" }, { "(= (bvmul x y) " + p + ")", "(bvugt x " + one + ")", "(bvugt y " + one + ")" } };
  default:
    return { w, { "x", "y" }, { "(= (bvmul x y) " + p + ")", "(= ((_ extract 0 0) x) #b1)", "(= ((_ extract 0 0) y) #b1)" } };
  }
}

Draft square(Builder &b, unsigned w) { return { w, { "x" }, { "(= (bvmul x x) " + Builder::lit(b.value(w), w) + ")" } }; }

Draft division_identity(Builder &b, unsigned w)
{
  if (b.pick(0, 1) == 0) return { w, { "x", "y" }, { "(distinct x (bvadd (bvmul (bvudiv x y) y) (bvurem x y)))" } };
  return { w, { "x", "y" }, { "(distinct x (bvadd (bvmul (bvsdiv x y) y) (bvsrem x y)))" } };
}

}// namespace

std::vector<CorpusEntry> generate_corpus(const CorpusOptions &options)
{
  struct Spec
  {
    const char *name;
    Family make;
    unsigned max_width;
  };
  // Width caps keep every instance settleable in seconds: distributivity and
  // the masked disequalities end in several full circuits side by side.
  const Spec families[] = {
    { "eq", random_equality, 16 },
    { "diseq", masked_disequality, 8 },
    { "comm", commutativity, 16 },
    { "distrib", distributivity, 5 },
    { "pow2", power_of_two, 16 },
    { "square", square, 16 },
    { "divrem", division_identity, 12 },
  };

  Builder b(options.seed);
  std::vector<CorpusEntry> out;
  for (const auto &fam : families) {
    const unsigned hi = std::min(options.max_width, fam.max_width);
    for (unsigned n = 0; n < options.per_family; ++n) {
      const unsigned w = b.pick(options.min_width, std::max(options.min_width, hi));
      const Draft d = fam.make(b, w);

      TermTable table;
      const Script script = parse_script(table, render(d, "unknown"));
      const bool small = d.width * d.vars.size() <= options.oracle_bits;
      std::unique_ptr<Backend> backend;
      if (small) backend = std::make_unique<OracleBackend>(table, options.oracle_bits);
      else backend = std::make_unique<BuiltinBackend>(table);
      for (Term a : script.assertions) backend->assert_term(a);
      const Result r = backend->check_sat(small ? Deadline::never() : Deadline::after(options.baseline_timeout));
      if (r == Result::Unknown) continue;

      CorpusEntry e;
      e.family = fam.name;
      e.status = to_string(r);
      e.settled_by = small ? "oracle" : "baseline";
      e.name = e.family + "_" + std::to_string(w) + "_" + std::to_string(n) + ".smt2";
      e.text = render(d, e.status);
      out.push_back(std::move(e));
    }
  }
  return out;
}

}// namespace lazybv
