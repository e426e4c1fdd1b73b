#ifndef LAZYBV_BACKEND_HPP
#define LAZYBV_BACKEND_HPP

#include "lazybv/deadline.hpp"
#include "lazybv/sat.hpp"
#include "lazybv/term.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace lazybv {

using Result = sat::Result;

std::string to_string(Result r);

/**
 * Incremental, add-only satisfiability interface over one TermTable.
 *
 * Once a check answers unsat, every later check answers unsat without
 * consulting the implementation. get_value is only legal directly after a sat
 * answer; symbols the implementation never saw get the default value (zero or
 * false), since nothing constrains them.
 */
class Backend
{
public:
  enum class State { Idle, SatKnown, UnsatKnown };

  virtual ~Backend() = default;
  Backend(const Backend &) = delete;
  Backend &operator=(const Backend &) = delete;

  void assert_term(Term t);
  Result check_sat(const Deadline &deadline = Deadline::never());
  /// Throws NotSatError unless the last check was sat; every term must be a symbol.
  Model get_value(std::span<const Term> symbols);

  [[nodiscard]] State state() const { return state_; }
  [[nodiscard]] const std::vector<Term> &asserted() const { return asserted_; }
  [[nodiscard]] virtual std::string name() const = 0;

protected:
  explicit Backend(TermTable &table) : table_(table) {}

  virtual void do_assert(Term t) = 0;
  virtual Result do_check(const Deadline &deadline) = 0;
  /// Only called in SatKnown; `symbols` are all symbol terms.
  virtual Model do_get_values(std::span<const Term> symbols) = 0;

  TermTable &table_;

private:
  State state_ = State::Idle;
  std::vector<Term> asserted_;
};

struct BuiltinOptions
{
  sat::SolverOptions sat;
  /// Keep a copy of every clause for DIMACS export.
  bool record_cnf = false;
};

/// Bit-blasting backend on the in-tree CDCL solver.
class BuiltinBackend : public Backend
{
public:
  explicit BuiltinBackend(TermTable &table, BuiltinOptions options = {});
  ~BuiltinBackend() override;

  [[nodiscard]] std::string name() const override { return "builtin"; }
  [[nodiscard]] const sat::SolverStats &sat_stats() const;
  /// Empty unless record_cnf was set.
  [[nodiscard]] std::string dimacs() const;

protected:
  void do_assert(Term t) override;
  Result do_check(const Deadline &deadline) override;
  Model do_get_values(std::span<const Term> symbols) override;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/**
 * Exhaustive enumeration over the free symbols of the assertions.
 *
 * Symbols are ordered so that conjuncts become fully assigned as early as
 * possible, and a branch is cut as soon as one fully assigned conjunct is
 * false. Throws OracleCapacityError when the free symbols carry more than
 * `max_free_bits` bits, or when a width exceeds 64.
 */
class OracleBackend : public Backend
{
public:
  explicit OracleBackend(TermTable &table, unsigned max_free_bits = 24);
  ~OracleBackend() override;

  [[nodiscard]] std::string name() const override { return "oracle"; }
  /// Leaves of the search tree visited by the last check.
  [[nodiscard]] std::uint64_t visited() const;

protected:
  void do_assert(Term t) override;
  Result do_check(const Deadline &deadline) override;
  Model do_get_values(std::span<const Term> symbols) override;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ExternalConfig
{
  std::string path;
  std::vector<std::string> args;
};

/// SMT-LIB 2.6 solver process driven over its stdin/stdout.
class ExternalBackend : public Backend
{
public:
  ExternalBackend(TermTable &table, ExternalConfig config);
  ~ExternalBackend() override;

  [[nodiscard]] std::string name() const override { return "external"; }
  /// Everything written to the process so far.
  [[nodiscard]] const std::string &transcript() const;

protected:
  void do_assert(Term t) override;
  Result do_check(const Deadline &deadline) override;
  Model do_get_values(std::span<const Term> symbols) override;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// "builtin", "oracle", "oracle:<bits>", or "external:<path> [args...]".
std::unique_ptr<Backend> make_backend(TermTable &table, const std::string &spec);

}// namespace lazybv

#endif
