#ifndef LAZYBV_ABSTRACTION_HPP
#define LAZYBV_ABSTRACTION_HPP

#include "lazybv/term.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace lazybv {

enum class OpKind { Mul, Sdiv, Udiv, Srem, Urem };

std::string_view to_string(OpKind op);
Kind native_kind(OpKind op);
std::optional<OpKind> op_kind_of(Kind kind);

/**
 * Approximation stages.
 *
 * Mul runs Simple, Intervals, Relations, FullInterval. The division family
 * runs Relations (which for Sdiv/Udiv/Urem also carries simple-case facts)
 * and then Full.
 */
enum class Stage { Simple, Intervals, Relations, FullInterval, Full };

std::string_view to_string(Stage s);
std::optional<Stage> parse_stage(std::string_view name);

/// One refinement step: stages emitted together.
using Step = std::vector<Stage>;

enum class FreshSymbolPolicy { PerApplication, SharedPerOp };
enum class SignedMode { Signed, RewriteUnsigned };

struct SchemeConfig
{
  /// Off: formulas go to the backend with native operations (baseline).
  bool enabled = true;
  std::vector<Step> mul_steps{ { Stage::Simple }, { Stage::Intervals }, { Stage::Relations }, { Stage::FullInterval } };
  std::vector<Step> div_steps{ { Stage::Relations }, { Stage::Full } };
  FreshSymbolPolicy fresh_symbols = FreshSymbolPolicy::PerApplication;
  SignedMode signed_mode = SignedMode::Signed;
  /// Instances created by relation stages have depth parent + 1; relation
  /// stages of instances at this depth emit no relations.
  unsigned max_spawn_depth = 1;

  static SchemeConfig baseline();
  static SchemeConfig full();
  /// Drops the Mul step at 1-based position `n`.
  static SchemeConfig omit_step(unsigned n);
  /// Merges Mul steps `a` and `a + 1` (1-based) into one.
  static SchemeConfig merge_steps(unsigned a);
  /// First `n` Mul steps only; the scheme is then not sound on its own.
  static SchemeConfig prefix(unsigned n);

  [[nodiscard]] const std::vector<Step> &steps(OpKind op) const { return op == OpKind::Mul ? mul_steps : div_steps; }
  /// Last step of every scheme is the sound one (FullInterval or Full).
  [[nodiscard]] bool sound() const;
  /// Throws std::invalid_argument for malformed step lists.
  void validate() const;
};

/// Named variants: baseline, full, step1, step12, step123, omit2, merge23.
SchemeConfig variant_config(const std::string &name);
std::vector<std::string> variant_names();

/**
 * One abstracted application op(x, y) and its refinement state.
 *
 * For Mul, x2p/y2p are the double-width magnitudes, r2p the fresh symbol
 * standing for their unsigned product and r2 the signed double-width product
 * rebuilt from r2p; ap equals the low half of r2.
 */
struct AbstractionInstance
{
  std::size_t id = 0;
  OpKind op = OpKind::Mul;
  Term x;
  Term y;
  Term ap;
  unsigned width = 0;
  unsigned depth = 0;

  Term x2;
  Term y2;
  Term x2p;
  Term y2p;
  Term r2p;
  Term r2;
  bool definitions_emitted = false;

  std::size_t cursor = 0;
  std::set<unsigned> hbs_indices;
  bool zero_guard_emitted = false;
  bool exhausted = false;

  std::size_t refinements = 0;
  std::size_t full_interval_refinements = 0;
};

struct StageOutput
{
  std::vector<Term> constraints;
  std::vector<std::size_t> spawned;
};

/**
 * Registry of abstracted applications and generator of their stage
 * constraints, over one TermTable.
 */
class AbstractionEngine
{
public:
  AbstractionEngine(TermTable &table, SchemeConfig config);

  /// Replaces every abstracted application by its instance's ap symbol.
  std::vector<Term> abstract_formula(std::span<const Term> assertions);

  /// Instance for op(x, y), created on first request. Both operands constant: nullopt.
  std::size_t instance_for(OpKind op, Term x, Term y, unsigned depth);
  /// ap-term of op(x, y): a folded constant, an instance's ap, or (rewrite
  /// mode, signed ops) the sign-case decomposition over unsigned instances.
  Term apply(OpKind op, Term x, Term y, unsigned depth);

  [[nodiscard]] const std::vector<AbstractionInstance> &instances() const { return instances_; }
  AbstractionInstance &instance(std::size_t id) { return instances_.at(id); }
  [[nodiscard]] const SchemeConfig &config() const { return config_; }
  [[nodiscard]] TermTable &table() { return table_; }

  /// Bit widths seen in the input formula and in all instances.
  [[nodiscard]] const std::set<unsigned> &context_widths() const { return widths_; }

  // Stage generators. Each may spawn instances, whose ids are listed.
  StageOutput mul_stage_simple(std::size_t id);
  StageOutput mul_stage_intervals(std::size_t id);
  StageOutput mul_stage_relations(std::size_t id);
  /// `x_value` is the model value of the instance's first operand.
  StageOutput mul_stage_full_interval(std::size_t id, const BvValue &x_value);
  StageOutput div_stage_relations(std::size_t id);
  StageOutput op_stage_full(std::size_t id);

  /// Emits the next step of the instance's scheme; nullopt once exhausted.
  std::optional<StageOutput> next_refinement(std::size_t id, const BvValue &x_value);

  /// Exact value of an instance's op under `lookup`-resolved operands.
  /// Symbols this engine created (ap, r2p) map to their defining native
  /// terms, which is how unassigned engine symbols are extended exactly.
  [[nodiscard]] std::optional<Term> definition(Term symbol) const;
  /// Engine-created symbols, in creation order.
  [[nodiscard]] const std::vector<Term> &symbols() const { return symbols_; }

  // Term builders (public for tests).
  Term noov(Term x, Term y);
  Term hbs(Term x, unsigned i);
  /// Unrolled L(a, b, n) and U(a, b, n) over 2w-bit a, b.
  Term lower_bound(Term a, Term b, unsigned n);
  Term upper_bound(Term a, Term b, unsigned n);
  Term is_zero(Term x);
  Term is_value(Term x, std::int64_t v);
  /// extract with extract-of-extension and full-width slices folded.
  Term slice(Term x, unsigned hi, unsigned lo);
  Term constant(unsigned width, std::int64_t v) { return table_.mk_const(BvValue::from_i64(width, v)); }

private:
  void emit_definitions(AbstractionInstance &inst, StageOutput &out);
  Term fresh_symbol(const std::string &prefix, unsigned width, Term definition);
  Term rewrite_signed(OpKind op, Term x, Term y, unsigned depth);
  void functional_consistency(std::size_t id, StageOutput &out);

  TermTable &table_;
  SchemeConfig config_;
  std::vector<AbstractionInstance> instances_;
  std::map<std::tuple<OpKind, std::uint32_t, std::uint32_t>, std::size_t> index_;
  std::unordered_map<Term, std::size_t> by_ap_;
  std::unordered_map<Term, Term> definitions_;
  std::vector<Term> symbols_;
  std::set<unsigned> widths_;
  std::size_t spawned_since_ = 0;
};

}// namespace lazybv

#endif
