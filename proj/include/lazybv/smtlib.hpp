#ifndef LAZYBV_SMTLIB_HPP
#define LAZYBV_SMTLIB_HPP

#include "lazybv/term.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lazybv {

/// Token tree of SMT-LIB concrete syntax.
struct SExpr
{
  enum class Type { Atom, List };

  Type type = Type::Atom;
  std::string atom;
  /// Atom was written as |...| (always a symbol then).
  bool quoted = false;
  std::vector<SExpr> list;
  std::size_t line = 1;
  std::size_t column = 1;

  [[nodiscard]] bool is_atom() const { return type == Type::Atom; }
  [[nodiscard]] bool is_list() const { return type == Type::List; }
  [[nodiscard]] bool is_symbol(std::string_view s) const { return is_atom() && !quoted && atom == s; }
  [[nodiscard]] std::string to_string() const;
};

/// Reads consecutive s-expressions; `;` comments run to end of line.
class SExprReader
{
public:
  explicit SExprReader(std::string_view text) : text_(text) {}

  /// Next top-level expression, or nullopt at end of input.
  std::optional<SExpr> next();

private:
  void skip_space();
  SExpr read_atom();
  [[noreturn]] void fail(const std::string &what) const;

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

struct Command
{
  enum class Type {
    SetLogic,
    SetInfo,
    SetOption,
    DeclareFun,
    DefineFun,
    Assert,
    CheckSat,
    GetModel,
    GetValue,
    Exit,
  };

  Type type;
  /// Logic name, info/option keyword, or declared/defined symbol name.
  std::string name;
  /// Raw attribute value for set-info/set-option.
  std::string value;
  /// Declared symbol, asserted term, or get-value terms.
  std::vector<Term> terms;
};

/**
 * A parsed QF_BV script.
 *
 * Every symbol used in an assertion is declared earlier; all assertions are
 * Bool-sorted.
 */
struct Script
{
  std::string logic;
  std::vector<Term> declarations;
  std::vector<Term> assertions;
  std::vector<Command> commands;
  /// From (set-info :status ...), when present.
  std::optional<std::string> status;
};

/**
 * Stateful SMT-LIB reader over one TermTable.
 *
 * Keeps declarations and zero-arity definitions across calls, so a session
 * can be fed one command at a time.
 */
class Parser
{
public:
  explicit Parser(TermTable &table) : table_(table) {}

  Script parse_script(std::string_view text);
  Command parse_command(const SExpr &e);
  Term parse_term(const SExpr &e);
  Term parse_term(std::string_view text);
  [[nodiscard]] const std::vector<Term> &declarations() const { return declarations_; }

private:
  Term term(const SExpr &e);
  Term atom_term(const SExpr &e);
  Term apply(const SExpr &e);
  Term apply_indexed(const SExpr &head, const std::vector<Term> &args, const SExpr &where);
  Term apply_op(const std::string &op, std::vector<Term> args, const SExpr &where);
  Sort parse_sort(const SExpr &e);
  Term lookup(const SExpr &e);

  TermTable &table_;
  std::vector<Term> declarations_;
  std::unordered_map<std::string, Term> declared_;
  std::unordered_map<std::string, Term> defines_;
  std::vector<std::unordered_map<std::string, Term>> scopes_;
};

Script parse_script(TermTable &table, std::string_view text);

/// Literal or constant s-expression (#b.., #x.., (_ bvN w), true, false).
Value parse_value(const SExpr &e);

struct PrintOptions
{
  /// Bind shared non-leaf subterms with `let` instead of repeating them.
  bool share = true;
};

/// SMT-LIB text of `t`; literals print as #x.. when the width is a multiple of 4, else #b...
std::string print_term(const TermTable &table, Term t, PrintOptions options = {});
std::string print_symbol(std::string_view name);
std::string print_value(const Value &v);
/// set-logic, declarations, assertions, check-sat.
std::string print_script(const TermTable &table, const Script &script, PrintOptions options = {});

}// namespace lazybv

#endif
