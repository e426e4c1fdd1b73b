#ifndef LAZYBV_REFINEMENT_HPP
#define LAZYBV_REFINEMENT_HPP

#include "lazybv/abstraction.hpp"
#include "lazybv/backend.hpp"
#include "lazybv/smtlib.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace lazybv {

struct Limits
{
  /// Wall-clock budget for the whole loop; 0 or less means none.
  double timeout_seconds = 1200;
  /// 0 means unlimited.
  std::size_t max_rounds = 0;
  /// Called once per refinement round with the round's spurious model
  /// (extended exactly over engine symbols) and the constraints it added.
  std::function<void(const Model &, std::span<const Term>)> on_round;
};

enum class UnknownReason { None, Timeout, BackendFailure, Incomplete, RoundLimit };

std::string_view to_string(UnknownReason r);

struct InstanceStats
{
  std::size_t id;
  OpKind op;
  unsigned width;
  unsigned depth;
  std::size_t steps_taken;
  std::size_t refinements;
  std::size_t full_interval_refinements;
  std::vector<unsigned> hbs_indices;
  bool exhausted;
};

struct SolveResult
{
  Result status = Result::Unknown;
  /// Sat only: values of the script's declared symbols.
  Model model;
  UnknownReason reason = UnknownReason::None;
  std::string message;
  /// Refinement rounds, i.e. check-sat calls after the first.
  std::size_t rounds = 0;
  std::size_t constraints = 0;
  std::vector<InstanceStats> instances;
};

/// Instances whose ap value differs from the exact operation under `model`.
/// Throws MissingAssignmentError when the model lacks a needed symbol.
std::vector<std::size_t> check_spurious(const AbstractionEngine &engine, const TermTable &table, const Model &model);

/// `model` plus, for every engine symbol it lacks, the exact value of the
/// symbol's defining operation. Engine symbols are defined in creation order.
Model extend_exactly(const AbstractionEngine &engine, const TermTable &table, const Model &model);

/// Restriction to the script's declared symbols; undeclared-by-model ones get defaults.
Model project_model(const TermTable &table, const Model &model, const Script &script);

/**
 * Abstraction-refinement loop.
 *
 * Only complete over-approximations are ever asserted, so unsat answers
 * transfer to the input. A sat answer is returned only after the projected
 * model satisfies every original assertion. Assertions are only added.
 */
SolveResult solve(TermTable &table, const Script &script, const SchemeConfig &config, Backend &backend, Limits limits = {});

}// namespace lazybv

#endif
