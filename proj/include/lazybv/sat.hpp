#ifndef LAZYBV_SAT_HPP
#define LAZYBV_SAT_HPP

#include "lazybv/deadline.hpp"

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace lazybv::sat {

/// DIMACS literal: +v / -v for variable v >= 1.
using Lit = int;

enum class Result { Sat, Unsat, Unknown };

/// Anything clauses can be streamed into (a CNF buffer or a solver).
class ClauseSink
{
public:
  virtual ~ClauseSink() = default;
  virtual int new_var() = 0;
  virtual void add_clause(std::span<const Lit> clause) = 0;
  void add_clause(std::initializer_list<Lit> clause) { add_clause(std::span<const Lit>(clause.begin(), clause.size())); }
};

/// Plain clause list. An empty clause is not stored; it marks the formula unsat.
class CnfFormula : public ClauseSink
{
public:
  using ClauseSink::add_clause;

  int new_var() override { return ++num_vars; }
  void add_clause(std::span<const Lit> clause) override;

  [[nodiscard]] std::string to_dimacs() const;

  int num_vars = 0;
  std::vector<std::vector<Lit>> clauses;
  bool has_empty_clause = false;
};

struct SolverOptions
{
  /// Off: plain DPLL with chronological backtracking, nothing learned.
  bool learning = true;
  bool restarts = true;
  /// 0 means unlimited.
  std::uint64_t conflict_budget = 0;
};

struct SolverStats
{
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t restarts = 0;
  std::uint64_t learned = 0;
};

/**
 * Incremental CDCL solver.
 *
 * Two-watched-literal propagation, first-UIP learning with non-chronological
 * backjumping, VSIDS branching with phase saving, Luby restarts and
 * activity-based learned clause deletion. Clauses may be added between solve
 * calls; learned clauses are kept.
 */
class Solver : public ClauseSink
{
public:
  using ClauseSink::add_clause;

  explicit Solver(SolverOptions options = {});
  ~Solver() override;
  Solver(const Solver &) = delete;
  Solver &operator=(const Solver &) = delete;

  int new_var() override;
  void add_clause(std::span<const Lit> clause) override;
  void add_formula(const CnfFormula &f);

  Result solve(const Deadline &deadline = Deadline::never());

  /// Valid after Sat.
  [[nodiscard]] bool value(int var) const;
  [[nodiscard]] bool lit_value(Lit lit) const { return lit > 0 ? value(lit) : !value(-lit); }
  [[nodiscard]] int num_vars() const;
  [[nodiscard]] const SolverStats &stats() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot convenience: solve `f`, filling `assignment[v]` for v in 1..num_vars.
Result solve_cnf(const CnfFormula &f, std::vector<bool> &assignment, SolverOptions options = {},
  const Deadline &deadline = Deadline::never());

}// namespace lazybv::sat

#endif
