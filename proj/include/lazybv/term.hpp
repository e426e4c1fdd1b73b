#ifndef LAZYBV_TERM_HPP
#define LAZYBV_TERM_HPP

#include "lazybv/bv_value.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace lazybv {

enum class Kind : std::uint8_t {
  BoolConst,
  BvConst,
  Symbol,
  Not,
  And,
  Or,
  Xor,
  Implies,
  Eq,
  Ite,
  BvNot,
  BvAnd,
  BvOr,
  BvXor,
  BvNeg,
  BvAdd,
  BvSub,
  BvMul,
  BvUdiv,
  BvSdiv,
  BvUrem,
  BvSrem,
  BvShl,
  BvLshr,
  BvAshr,
  BvUlt,
  BvUle,
  BvSlt,
  BvSle,
  Concat,
  Extract,
  SignExtend,
  ZeroExtend,
};

/// SMT-LIB operator name (`bvmul`, `extract`, ...). Empty for leaves.
std::string_view smtlib_name(Kind kind);

/// Bool, or a bit-vector of positive width. Bool and (_ BitVec 1) differ.
class Sort
{
public:
  static Sort boolean() { return Sort{}; }
  static Sort bv(unsigned width);

  [[nodiscard]] bool is_bool() const { return width_ == 0; }
  [[nodiscard]] bool is_bv() const { return width_ != 0; }
  [[nodiscard]] unsigned width() const { return width_; }
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(Sort, Sort) = default;

private:
  unsigned width_ = 0;
};

/// Handle to a hash-consed node of a TermTable.
struct Term
{
  std::uint32_t id = UINT32_MAX;

  [[nodiscard]] bool valid() const { return id != UINT32_MAX; }
  friend auto operator<=>(Term, Term) = default;
};

}// namespace lazybv

template<> struct std::hash<lazybv::Term>
{
  std::size_t operator()(lazybv::Term t) const noexcept { return std::hash<std::uint32_t>{}(t.id); }
};

namespace lazybv {

/// Extract uses (hi, lo); SignExtend/ZeroExtend use `hi` as the amount.
struct Attrs
{
  unsigned hi = 0;
  unsigned lo = 0;
};

struct TermNode
{
  Kind kind;
  Sort sort;
  std::vector<Term> children;
  Attrs attrs;
  bool bool_value = false;
  BvValue value;
  std::string name;
};

/**
 * Owner of all terms of one solving session.
 *
 * Construction sort-checks and deduplicates: structurally equal requests
 * return the same Term. Nodes are immutable once created and only reference
 * older nodes, so ids are a topological order.
 */
class TermTable
{
public:
  TermTable();
  TermTable(const TermTable &) = delete;
  TermTable &operator=(const TermTable &) = delete;

  /// Generic constructor for operator kinds; leaves have dedicated factories.
  Term mk(Kind kind, std::span<const Term> children, Attrs attrs = {});
  Term mk(Kind kind, std::initializer_list<Term> children, Attrs attrs = {})
  {
    return mk(kind, std::span<const Term>(children.begin(), children.size()), attrs);
  }

  Term mk_bool(bool value);
  Term mk_true() { return mk_bool(true); }
  Term mk_false() { return mk_bool(false); }
  Term mk_const(const BvValue &value);
  Term mk_const(unsigned width, std::uint64_t value) { return mk_const(BvValue::from_u64(width, value)); }
  /// Returns the existing symbol when re-declared with the same sort.
  Term mk_symbol(std::string_view name, Sort sort);
  [[nodiscard]] std::optional<Term> find_symbol(std::string_view name) const;
  /// A symbol name `prefix!N` not yet used in this table.
  std::string fresh_name(std::string_view prefix);

  [[nodiscard]] const TermNode &node(Term t) const { return nodes_.at(t.id); }
  [[nodiscard]] Kind kind(Term t) const { return node(t).kind; }
  [[nodiscard]] Sort sort(Term t) const { return node(t).sort; }
  [[nodiscard]] unsigned width(Term t) const { return node(t).sort.width(); }
  [[nodiscard]] bool is_const(Term t) const;
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }

  // Builders. The n-ary Boolean ones fold 0/1-element inputs.
  Term not_(Term a);
  Term and_(std::span<const Term> xs);
  Term and_(std::initializer_list<Term> xs) { return and_(std::span<const Term>(xs.begin(), xs.size())); }
  Term or_(std::span<const Term> xs);
  Term or_(std::initializer_list<Term> xs) { return or_(std::span<const Term>(xs.begin(), xs.size())); }
  Term xor_(Term a, Term b) { return mk(Kind::Xor, { a, b }); }
  Term implies(Term a, Term b) { return mk(Kind::Implies, { a, b }); }
  Term eq(Term a, Term b) { return mk(Kind::Eq, { a, b }); }
  Term ite(Term c, Term t, Term e) { return mk(Kind::Ite, { c, t, e }); }

  Term bvnot(Term a) { return mk(Kind::BvNot, { a }); }
  Term bvneg(Term a) { return mk(Kind::BvNeg, { a }); }
  Term bvand(Term a, Term b) { return mk(Kind::BvAnd, { a, b }); }
  Term bvor(Term a, Term b) { return mk(Kind::BvOr, { a, b }); }
  Term bvxor(Term a, Term b) { return mk(Kind::BvXor, { a, b }); }
  Term bvadd(Term a, Term b) { return mk(Kind::BvAdd, { a, b }); }
  Term bvsub(Term a, Term b) { return mk(Kind::BvSub, { a, b }); }
  Term bvmul(Term a, Term b) { return mk(Kind::BvMul, { a, b }); }
  Term bvudiv(Term a, Term b) { return mk(Kind::BvUdiv, { a, b }); }
  Term bvsdiv(Term a, Term b) { return mk(Kind::BvSdiv, { a, b }); }
  Term bvurem(Term a, Term b) { return mk(Kind::BvUrem, { a, b }); }
  Term bvsrem(Term a, Term b) { return mk(Kind::BvSrem, { a, b }); }
  Term bvshl(Term a, Term b) { return mk(Kind::BvShl, { a, b }); }
  Term bvlshr(Term a, Term b) { return mk(Kind::BvLshr, { a, b }); }
  Term bvashr(Term a, Term b) { return mk(Kind::BvAshr, { a, b }); }
  Term bvult(Term a, Term b) { return mk(Kind::BvUlt, { a, b }); }
  Term bvule(Term a, Term b) { return mk(Kind::BvUle, { a, b }); }
  Term bvslt(Term a, Term b) { return mk(Kind::BvSlt, { a, b }); }
  Term bvsle(Term a, Term b) { return mk(Kind::BvSle, { a, b }); }
  Term concat(Term hi, Term lo) { return mk(Kind::Concat, { hi, lo }); }
  Term extract(unsigned hi, unsigned lo, Term a) { return mk(Kind::Extract, { a }, { hi, lo }); }
  Term sext(Term a, unsigned extra) { return mk(Kind::SignExtend, { a }, { extra, 0 }); }
  Term zext(Term a, unsigned extra) { return mk(Kind::ZeroExtend, { a }, { extra, 0 }); }
  /// Bit `i` of `a` as a Bool: (= ((_ extract i i) a) #b1).
  Term bit(Term a, unsigned i);

private:
  Term intern(TermNode node);
  static std::size_t hash_node(const TermNode &n);
  static bool same_node(const TermNode &a, const TermNode &b);

  std::vector<TermNode> nodes_;
  std::unordered_map<std::size_t, std::vector<Term>> buckets_;
  std::unordered_map<std::string, Term> symbols_;
  std::unordered_map<std::string, unsigned> fresh_counters_;
};

/// Result of evaluating a term: Bool or bit-vector.
using Value = std::variant<bool, BvValue>;

std::string to_string(const Value &v);

/// Assignment of values to symbols.
class Model
{
public:
  void set(Term symbol, Value v) { values_.insert_or_assign(symbol, std::move(v)); }
  [[nodiscard]] const Value *find(Term symbol) const
  {
    auto it = values_.find(symbol);
    return it == values_.end() ? nullptr : &it->second;
  }
  [[nodiscard]] bool contains(Term symbol) const { return values_.contains(symbol); }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] const std::unordered_map<Term, Value> &values() const { return values_; }
  /// Restriction to the given symbols (absent ones are skipped).
  [[nodiscard]] Model restrict_to(std::span<const Term> symbols) const;

  friend bool operator==(const Model &a, const Model &b) = default;

private:
  std::unordered_map<Term, Value> values_;
};

/**
 * Memoizing evaluator over one TermTable.
 *
 * Symbols are resolved through the lookup callback; a symbol it cannot
 * resolve raises UnboundSymbolError.
 */
class Evaluator
{
public:
  using Lookup = std::function<std::optional<Value>(Term)>;

  Evaluator(const TermTable &table, Lookup lookup);
  Evaluator(const TermTable &table, const Model &model);

  Value operator()(Term t);
  bool eval_bool(Term t);
  BvValue eval_bv(Term t);

private:
  Value compute(Term t);

  const TermTable &table_;
  Lookup lookup_;
  std::unordered_map<Term, Value> cache_;
};

Value eval(const TermTable &table, Term t, const Model &model);

/// Simultaneous replacement of DAG nodes; sorts of each pair must agree.
Term substitute(TermTable &table, Term t, const std::unordered_map<Term, Term> &map);

/// Free symbols of `roots`, in first-occurrence (depth-first) order.
std::vector<Term> collect_symbols(const TermTable &table, std::span<const Term> roots);
/// All bit-vector widths occurring in the DAGs below `roots`.
std::vector<unsigned> collect_widths(const TermTable &table, std::span<const Term> roots);
/// Nodes reachable from `roots`, children before parents.
std::vector<Term> topological_order(const TermTable &table, std::span<const Term> roots);

}// namespace lazybv

#endif
