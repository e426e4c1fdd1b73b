#include "lazybv/smtlib.hpp"

#include "lazybv/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <unordered_set>

namespace lazybv {

// ---------------------------------------------------------------------------
// s-expressions

std::string SExpr::to_string() const
{
  if (is_atom()) return quoted ? "|" + atom + "|" : atom;
  std::string out = "(";
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i != 0) out += ' ';
    out += list[i].to_string();
  }
  return out + ")";
}

void SExprReader::fail(const std::string &what) const { throw SyntaxError(what, line_, column_); }

void SExprReader::skip_space()
{
  while (pos_ < text_.size()) {
    const char c = text_[pos_];
    if (c == ';') {
      while (pos_ < text_.size() && text_[pos_] != '\n') {
        ++pos_;
        ++column_;
      }
    } else if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      ++pos_;
      if (c == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
    } else {
      return;
    }
  }
}

SExpr SExprReader::read_atom()
{
  SExpr e;
  e.line = line_;
  e.column = column_;
  const char c = text_[pos_];
  auto advance = [this] {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  };
  if (c == '|') {
    advance();
    while (pos_ < text_.size() && text_[pos_] != '|') {
      if (text_[pos_] == '\\') fail("backslash in quoted symbol");
      e.atom.push_back(text_[pos_]);
      advance();
    }
    if (pos_ >= text_.size()) fail("unterminated quoted symbol");
    advance();
    e.quoted = true;
    return e;
  }
  if (c == '"') {
    e.atom.push_back('"');
    advance();
    for (;;) {
      if (pos_ >= text_.size()) fail("unterminated string literal");
      if (text_[pos_] == '"') {
        e.atom.push_back('"');
        advance();
        // "" is an escaped quote inside a string literal.
        if (pos_ < text_.size() && text_[pos_] == '"') {
          advance();
          continue;
        }
        break;
      }
      e.atom.push_back(text_[pos_]);
      advance();
    }
    return e;
  }
  while (pos_ < text_.size()) {
    const char d = text_[pos_];
    if (std::isspace(static_cast<unsigned char>(d)) != 0 || d == '(' || d == ')' || d == ';' || d == '|' || d == '"')
      break;
    e.atom.push_back(d);
    advance();
  }
  return e;
}

std::optional<SExpr> SExprReader::next()
{
  skip_space();
  if (pos_ >= text_.size()) return std::nullopt;
  if (text_[pos_] == ')') fail("unexpected ')'");
  if (text_[pos_] != '(') return read_atom();

  std::vector<SExpr> stack;
  for (;;) {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input, missing ')'");
    const char c = text_[pos_];
    if (c == '(') {
      SExpr list;
      list.type = SExpr::Type::List;
      list.line = line_;
      list.column = column_;
      stack.push_back(std::move(list));
      ++pos_;
      ++column_;
    } else if (c == ')') {
      ++pos_;
      ++column_;
      SExpr done = std::move(stack.back());
      stack.pop_back();
      if (stack.empty()) return done;
      stack.back().list.push_back(std::move(done));
    } else {
      stack.back().list.push_back(read_atom());
    }
  }
}

// ---------------------------------------------------------------------------
// parsing

namespace {

[[noreturn]] void syntax(const SExpr &e, const std::string &what) { throw SyntaxError(what, e.line, e.column); }

std::string at(const SExpr &e) { return " at " + std::to_string(e.line) + ":" + std::to_string(e.column); }

unsigned numeral(const SExpr &e)
{
  if (!e.is_atom() || e.quoted || e.atom.empty()) syntax(e, "expected a numeral");
  unsigned value = 0;
  const char *first = e.atom.data();
  const char *last = first + e.atom.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) syntax(e, "expected a numeral, got '" + e.atom + "'");
  return value;
}

bool is_numeral(const std::string &s)
{
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
}

}// namespace

Value parse_value(const SExpr &e)
{
  if (e.is_atom() && !e.quoted) {
    if (e.atom == "true") return true;
    if (e.atom == "false") return false;
    try {
      if (e.atom.starts_with("#b") && e.atom.size() > 2) return BvValue::from_binary(std::string_view(e.atom).substr(2));
      if (e.atom.starts_with("#x") && e.atom.size() > 2) return BvValue::from_hex(std::string_view(e.atom).substr(2));
    } catch (const std::invalid_argument &err) {
      syntax(e, err.what());
    }
  }
  if (e.is_list() && e.list.size() == 3 && e.list[0].is_symbol("_") && e.list[1].is_atom()
      && e.list[1].atom.starts_with("bv") && is_numeral(e.list[1].atom.substr(2))) {
    const unsigned width = numeral(e.list[2]);
    if (width == 0) syntax(e, "bit-vector literal of width 0");
    return BvValue::from_decimal(width, e.list[1].atom.substr(2));
  }
  syntax(e, "expected a value, got '" + e.to_string() + "'");
}

Sort Parser::parse_sort(const SExpr &e)
{
  if (e.is_symbol("Bool")) return Sort::boolean();
  if (e.is_list() && e.list.size() == 3 && e.list[0].is_symbol("_") && e.list[1].is_symbol("BitVec")) {
    const unsigned w = numeral(e.list[2]);
    if (w == 0) syntax(e, "bit-vector sort of width 0");
    return Sort::bv(w);
  }
  if (e.is_list() && !e.list.empty() && e.list[0].is_symbol("Array"))
    throw UnsupportedFeatureError("arrays are not supported" + at(e));
  throw UnsupportedFeatureError("unsupported sort '" + e.to_string() + "'" + at(e));
}

Term Parser::lookup(const SExpr &e)
{
  for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
    if (auto hit = it->find(e.atom); hit != it->end()) return hit->second;
  if (auto hit = defines_.find(e.atom); hit != defines_.end()) return hit->second;
  if (auto hit = declared_.find(e.atom); hit != declared_.end()) return hit->second;
  throw UndeclaredSymbolError("undeclared symbol '" + e.atom + "'" + at(e));
}

Term Parser::atom_term(const SExpr &e)
{
  if (!e.quoted) {
    if (e.atom == "true") return table_.mk_true();
    if (e.atom == "false") return table_.mk_false();
    if (e.atom.starts_with("#")) return table_.mk_const(std::get<BvValue>(parse_value(e)));
    if (is_numeral(e.atom)) throw UnsupportedFeatureError("integer numerals are not supported" + at(e));
  }
  return lookup(e);
}

Term Parser::term(const SExpr &e)
{
  if (e.is_atom()) return atom_term(e);
  if (e.list.empty()) syntax(e, "empty application");
  const SExpr &head = e.list[0];
  if (head.is_symbol("_")) return table_.mk_const(std::get<BvValue>(parse_value(e)));
  if (head.is_symbol("let")) {
    if (e.list.size() != 3 || !e.list[1].is_list()) syntax(e, "malformed let");
    std::unordered_map<std::string, Term> frame;
    for (const SExpr &binding : e.list[1].list) {
      if (!binding.is_list() || binding.list.size() != 2 || !binding.list[0].is_atom())
        syntax(binding, "malformed let binding");
      frame.insert_or_assign(binding.list[0].atom, term(binding.list[1]));
    }
    scopes_.push_back(std::move(frame));
    Term body;
    try {
      body = term(e.list[2]);
    } catch (...) {
      scopes_.pop_back();
      throw;
    }
    scopes_.pop_back();
    return body;
  }
  if (head.is_symbol("forall") || head.is_symbol("exists"))
    throw UnsupportedFeatureError("quantifiers are not supported" + at(e));
  if (head.is_symbol("!")) throw UnsupportedFeatureError("term attributes are not supported" + at(e));
  if (head.is_symbol("select") || head.is_symbol("store"))
    throw UnsupportedFeatureError("arrays are not supported" + at(e));

  std::vector<Term> args;
  args.reserve(e.list.size() - 1);
  for (std::size_t i = 1; i < e.list.size(); ++i) args.push_back(term(e.list[i]));
  if (head.is_list()) return apply_indexed(head, args, e);
  if (head.quoted) throw UnsupportedFeatureError("uninterpreted function application" + at(e));
  return apply_op(head.atom, std::move(args), e);
}

Term Parser::apply_indexed(const SExpr &head, const std::vector<Term> &args, const SExpr &where)
{
  if (head.list.size() < 3 || !head.list[0].is_symbol("_") || !head.list[1].is_atom())
    syntax(head, "malformed indexed operator");
  const std::string &op = head.list[1].atom;
  if (args.size() != 1) throw SortError(op + " expects one argument" + at(where));
  const Term x = args[0];
  if (!table_.sort(x).is_bv()) throw SortError(op + " expects a bit-vector" + at(where));
  const unsigned w = table_.width(x);
  if (op == "extract") {
    if (head.list.size() != 4) syntax(head, "extract takes two indices");
    return table_.extract(numeral(head.list[2]), numeral(head.list[3]), x);
  }
  if (head.list.size() != 3) syntax(head, op + " takes one index");
  const unsigned k = numeral(head.list[2]);
  if (op == "sign_extend") return table_.sext(x, k);
  if (op == "zero_extend") return table_.zext(x, k);
  if (op == "repeat") {
    if (k == 0) throw InvalidAttrError("repeat count must be positive" + at(where));
    Term out = x;
    for (unsigned i = 1; i < k; ++i) out = table_.concat(out, x);
    return out;
  }
  if (op == "rotate_left" || op == "rotate_right") {
    unsigned r = k % w;
    if (op == "rotate_right") r = (w - r) % w;
    if (r == 0) return x;
    return table_.concat(table_.extract(w - 1 - r, 0, x), table_.extract(w - 1, w - r, x));
  }
  throw UnsupportedFeatureError("unsupported indexed operator '" + op + "'" + at(where));
}

Term Parser::apply_op(const std::string &op, std::vector<Term> args, const SExpr &where)
{
  auto need = [&](std::size_t n) {
    if (args.size() != n) throw SortError(op + " expects " + std::to_string(n) + " arguments" + at(where));
  };
  auto at_least = [&](std::size_t n) {
    if (args.size() < n) throw SortError(op + " expects at least " + std::to_string(n) + " arguments" + at(where));
  };
  auto fold_left = [&](Kind k) {
    at_least(2);
    Term acc = args[0];
    for (std::size_t i = 1; i < args.size(); ++i) acc = table_.mk(k, { acc, args[i] });
    return acc;
  };
  auto binary = [&](Kind k) {
    need(2);
    return table_.mk(k, { args[0], args[1] });
  };
  auto swapped = [&](Kind k) {
    need(2);
    return table_.mk(k, { args[1], args[0] });
  };

  if (op == "not") {
    need(1);
    return table_.not_(args[0]);
  }
  if (op == "and" || op == "or") {
    at_least(1);
    if (args.size() == 1) {
      if (!table_.sort(args[0]).is_bool()) throw SortError(op + " expects Bool arguments" + at(where));
      return args[0];
    }
    return table_.mk(op == "and" ? Kind::And : Kind::Or, args);
  }
  if (op == "xor") return fold_left(Kind::Xor);
  if (op == "=>") {
    at_least(2);
    Term acc = args.back();
    for (std::size_t i = args.size() - 1; i-- > 0;) acc = table_.implies(args[i], acc);
    return acc;
  }
  if (op == "=") {
    at_least(2);
    std::vector<Term> parts;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) parts.push_back(table_.eq(args[i], args[i + 1]));
    return table_.and_(parts);
  }
  if (op == "distinct") {
    at_least(2);
    std::vector<Term> parts;
    for (std::size_t i = 0; i < args.size(); ++i)
      for (std::size_t j = i + 1; j < args.size(); ++j) parts.push_back(table_.not_(table_.eq(args[i], args[j])));
    return table_.and_(parts);
  }
  if (op == "ite") {
    need(3);
    return table_.ite(args[0], args[1], args[2]);
  }
  if (op == "bvnot") {
    need(1);
    return table_.bvnot(args[0]);
  }
  if (op == "bvneg") {
    need(1);
    return table_.bvneg(args[0]);
  }
  if (op == "bvand") return fold_left(Kind::BvAnd);
  if (op == "bvor") return fold_left(Kind::BvOr);
  if (op == "bvxor") return fold_left(Kind::BvXor);
  if (op == "bvadd") return fold_left(Kind::BvAdd);
  if (op == "bvmul") return fold_left(Kind::BvMul);
  if (op == "bvsub") return fold_left(Kind::BvSub);
  if (op == "concat") return fold_left(Kind::Concat);
  if (op == "bvnand") return table_.bvnot(binary(Kind::BvAnd));
  if (op == "bvnor") return table_.bvnot(binary(Kind::BvOr));
  if (op == "bvxnor") return table_.bvnot(binary(Kind::BvXor));
  if (op == "bvcomp") {
    need(2);
    return table_.ite(table_.eq(args[0], args[1]), table_.mk_const(1, 1), table_.mk_const(1, 0));
  }
  if (op == "bvudiv") return binary(Kind::BvUdiv);
  if (op == "bvsdiv") return binary(Kind::BvSdiv);
  if (op == "bvurem") return binary(Kind::BvUrem);
  if (op == "bvsrem") return binary(Kind::BvSrem);
  if (op == "bvshl") return binary(Kind::BvShl);
  if (op == "bvlshr") return binary(Kind::BvLshr);
  if (op == "bvashr") return binary(Kind::BvAshr);
  if (op == "bvult") return binary(Kind::BvUlt);
  if (op == "bvule") return binary(Kind::BvUle);
  if (op == "bvslt") return binary(Kind::BvSlt);
  if (op == "bvsle") return binary(Kind::BvSle);
  if (op == "bvugt") return swapped(Kind::BvUlt);
  if (op == "bvuge") return swapped(Kind::BvUle);
  if (op == "bvsgt") return swapped(Kind::BvSlt);
  if (op == "bvsge") return swapped(Kind::BvSle);
  if (op == "bvsmod") {
    need(2);
    const Term s = args[0];
    const Term t = args[1];
    if (!table_.sort(s).is_bv() || table_.sort(s) != table_.sort(t)) throw SortError("bvsmod: bad arguments" + at(where));
    const unsigned m = table_.width(s);
    const Term msb_s = table_.bit(s, m - 1);
    const Term msb_t = table_.bit(t, m - 1);
    const Term abs_s = table_.ite(msb_s, table_.bvneg(s), s);
    const Term abs_t = table_.ite(msb_t, table_.bvneg(t), t);
    const Term u = table_.bvurem(abs_s, abs_t);
    const Term pos_s = table_.not_(msb_s);
    const Term pos_t = table_.not_(msb_t);
    return table_.ite(table_.eq(u, table_.mk_const(m, 0)), u,
      table_.ite(table_.and_({ pos_s, pos_t }), u,
        table_.ite(table_.and_({ msb_s, pos_t }), table_.bvadd(table_.bvneg(u), t),
          table_.ite(table_.and_({ pos_s, msb_t }), table_.bvadd(u, t), table_.bvneg(u)))));
  }
  if (declared_.contains(op) || defines_.contains(op))
    throw SortError("'" + op + "' is a constant, not a function" + at(where));
  throw UndeclaredSymbolError("unknown function '" + op + "'" + at(where));
}

Term Parser::parse_term(const SExpr &e) { return term(e); }

Term Parser::parse_term(std::string_view text)
{
  SExprReader reader(text);
  auto e = reader.next();
  if (!e) throw SyntaxError("expected a term", 1, 1);
  return term(*e);
}

Command Parser::parse_command(const SExpr &e)
{
  if (!e.is_list() || e.list.empty() || !e.list[0].is_atom()) syntax(e, "expected a command");
  const std::string &name = e.list[0].atom;
  auto need = [&](std::size_t n) {
    if (e.list.size() != n) syntax(e, "malformed " + name);
  };
  auto symbol_name = [&](const SExpr &s) {
    if (!s.is_atom()) syntax(s, "expected a symbol");
    return s.atom;
  };

  if (name == "set-logic") {
    need(2);
    return { Command::Type::SetLogic, symbol_name(e.list[1]), {}, {} };
  }
  if (name == "set-info" || name == "set-option") {
    if (e.list.size() < 2) syntax(e, "malformed " + name);
    std::string value;
    for (std::size_t i = 2; i < e.list.size(); ++i) value += (i > 2 ? " " : "") + e.list[i].to_string();
    return { name == "set-info" ? Command::Type::SetInfo : Command::Type::SetOption, e.list[1].atom, value, {} };
  }
  if (name == "declare-fun" || name == "declare-const") {
    std::string sym;
    Sort sort = Sort::boolean();
    if (name == "declare-fun") {
      need(4);
      if (!e.list[2].is_list()) syntax(e, "malformed declare-fun");
      if (!e.list[2].list.empty()) throw UnsupportedFeatureError("uninterpreted functions are not supported" + at(e));
      sym = symbol_name(e.list[1]);
      sort = parse_sort(e.list[3]);
    } else {
      need(3);
      sym = symbol_name(e.list[1]);
      sort = parse_sort(e.list[2]);
    }
    if (declared_.contains(sym) || defines_.contains(sym)) syntax(e, "symbol '" + sym + "' already declared");
    const Term t = table_.mk_symbol(sym, sort);
    declared_.emplace(sym, t);
    declarations_.push_back(t);
    return { Command::Type::DeclareFun, sym, {}, { t } };
  }
  if (name == "define-fun") {
    need(5);
    if (!e.list[2].is_list()) syntax(e, "malformed define-fun");
    if (!e.list[2].list.empty()) throw UnsupportedFeatureError("define-fun with arguments is not supported" + at(e));
    const std::string sym = symbol_name(e.list[1]);
    const Sort sort = parse_sort(e.list[3]);
    const Term body = term(e.list[4]);
    if (table_.sort(body) != sort) throw SortError("define-fun '" + sym + "' body has the wrong sort" + at(e));
    if (declared_.contains(sym) || defines_.contains(sym)) syntax(e, "symbol '" + sym + "' already declared");
    defines_.emplace(sym, body);
    return { Command::Type::DefineFun, sym, {}, { body } };
  }
  if (name == "assert") {
    need(2);
    const Term t = term(e.list[1]);
    if (!table_.sort(t).is_bool()) throw SortError("assertion is not Bool" + at(e));
    return { Command::Type::Assert, {}, {}, { t } };
  }
  if (name == "check-sat") {
    need(1);
    return { Command::Type::CheckSat, {}, {}, {} };
  }
  if (name == "get-model") {
    need(1);
    return { Command::Type::GetModel, {}, {}, {} };
  }
  if (name == "get-value") {
    need(2);
    if (!e.list[1].is_list() || e.list[1].list.empty()) syntax(e, "malformed get-value");
    Command c{ Command::Type::GetValue, {}, {}, {} };
    for (const SExpr &t : e.list[1].list) c.terms.push_back(term(t));
    return c;
  }
  if (name == "exit") return { Command::Type::Exit, {}, {}, {} };
  if (name == "push" || name == "pop") throw UnsupportedFeatureError("push/pop are not supported" + at(e));
  throw UnsupportedFeatureError("unsupported command '" + name + "'" + at(e));
}

Script Parser::parse_script(std::string_view text)
{
  Script script;
  SExprReader reader(text);
  while (auto e = reader.next()) {
    Command c = parse_command(*e);
    switch (c.type) {
    case Command::Type::SetLogic: script.logic = c.name; break;
    case Command::Type::SetInfo:
      if (c.name == ":status") script.status = c.value;
      break;
    case Command::Type::DeclareFun: script.declarations.push_back(c.terms[0]); break;
    case Command::Type::Assert: script.assertions.push_back(c.terms[0]); break;
    default: break;
    }
    const bool stop = c.type == Command::Type::Exit;
    script.commands.push_back(std::move(c));
    if (stop) break;
  }
  return script;
}

Script parse_script(TermTable &table, std::string_view text)
{
  Parser p(table);
  return p.parse_script(text);
}

// ---------------------------------------------------------------------------
// printing

namespace {

bool reserved_word(std::string_view s)
{
  static const std::unordered_set<std::string_view> words = { "let", "forall", "exists", "match", "par", "_", "!", "as",
    "BINARY", "DECIMAL", "HEXADECIMAL", "NUMERAL", "STRING" };
  return words.contains(s);
}

bool simple_symbol_char(char c)
{
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || std::string_view("~!@$%^&*_-+=<>.?/").find(c) != std::string_view::npos;
}

class Printer
{
public:
  Printer(const TermTable &table, PrintOptions options) : table_(table), options_(options) {}

  std::string print(Term root)
  {
    const std::vector<Term> order = topological_order(table_, std::span<const Term>(&root, 1));
    if (options_.share) mark_shared(root, order);
    if (names_.empty()) {
      std::string out;
      emit(root, out);
      return out;
    }
    // Group bindings by nesting level; one `let` per level.
    std::vector<std::vector<Term>> by_level(max_level_ + 1);
    for (Term t : order)
      if (names_.contains(t)) by_level[level_.at(t)].push_back(t);
    std::string out;
    for (unsigned l = 1; l <= max_level_; ++l) {
      out += "(let (";
      bool first = true;
      for (Term t : by_level[l]) {
        if (!first) out += ' ';
        first = false;
        out += "(" + names_.at(t) + " ";
        emit_structure(t, out);
        out += ")";
      }
      out += ") ";
    }
    emit(root, out);
    out.append(max_level_, ')');
    return out;
  }

private:
  void mark_shared(Term root, const std::vector<Term> &order)
  {
    std::unordered_map<Term, unsigned> refs;
    std::unordered_set<std::string> taken;
    for (Term t : order) {
      for (Term c : table_.node(t).children) ++refs[c];
      if (table_.kind(t) == Kind::Symbol) taken.insert(print_symbol(table_.node(t).name));
    }
    std::unordered_map<Term, unsigned> inner;
    unsigned counter = 0;
    for (Term t : order) {
      unsigned deepest = 0;
      for (Term c : table_.node(t).children) deepest = std::max(deepest, names_.contains(c) ? level_.at(c) : inner[c]);
      inner[t] = deepest;
      const bool leaf = table_.node(t).children.empty();
      if (t != root && !leaf && refs[t] >= 2) {
        std::string name;
        do {
          name = "?s" + std::to_string(counter++);
        } while (taken.contains(name));
        names_.emplace(t, name);
        level_.emplace(t, deepest + 1);
        max_level_ = std::max(max_level_, deepest + 1);
      }
    }
  }

  void emit(Term t, std::string &out)
  {
    if (auto it = names_.find(t); it != names_.end()) {
      out += it->second;
      return;
    }
    emit_structure(t, out);
  }

  void emit_structure(Term t, std::string &out)
  {
    const TermNode &n = table_.node(t);
    switch (n.kind) {
    case Kind::BoolConst: out += n.bool_value ? "true" : "false"; return;
    case Kind::BvConst: out += n.value.to_smtlib(); return;
    case Kind::Symbol: out += print_symbol(n.name); return;
    case Kind::Extract:
      out += "((_ extract " + std::to_string(n.attrs.hi) + " " + std::to_string(n.attrs.lo) + ") ";
      break;
    case Kind::SignExtend:
    case Kind::ZeroExtend:
      out += "((_ " + std::string(smtlib_name(n.kind)) + " " + std::to_string(n.attrs.hi) + ") ";
      break;
    default: out += "(" + std::string(smtlib_name(n.kind)) + " "; break;
    }
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i != 0) out += ' ';
      emit(n.children[i], out);
    }
    out += ')';
  }

  const TermTable &table_;
  PrintOptions options_;
  std::unordered_map<Term, std::string> names_;
  std::unordered_map<Term, unsigned> level_;
  unsigned max_level_ = 0;
};

}// namespace

std::string print_symbol(std::string_view name)
{
  const bool simple = !name.empty() && std::isdigit(static_cast<unsigned char>(name[0])) == 0
                      && std::all_of(name.begin(), name.end(), simple_symbol_char) && !reserved_word(name);
  return simple ? std::string(name) : "|" + std::string(name) + "|";
}

std::string print_term(const TermTable &table, Term t, PrintOptions options) { return Printer(table, options).print(t); }

std::string print_value(const Value &v) { return to_string(v); }

std::string print_script(const TermTable &table, const Script &script, PrintOptions options)
{
  std::string out;
  out += "(set-logic " + (script.logic.empty() ? std::string("QF_BV") : script.logic) + ")\n";
  if (script.status) out += "(set-info :status " + *script.status + ")\n";
  for (Term d : script.declarations)
    out += "(declare-fun " + print_symbol(table.node(d).name) + " () " + table.sort(d).to_string() + ")\n";
  for (Term a : script.assertions) out += "(assert " + print_term(table, a, options) + ")\n";
  out += "(check-sat)\n(exit)\n";
  return out;
}

}// namespace lazybv
