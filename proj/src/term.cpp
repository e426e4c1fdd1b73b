#include "lazybv/term.hpp"

#include "lazybv/errors.hpp"

#include <algorithm>
#include <unordered_set>

namespace lazybv {

std::string_view smtlib_name(Kind kind)
{
  switch (kind) {
  case Kind::BoolConst:
  case Kind::BvConst:
  case Kind::Symbol: return "";
  case Kind::Not: return "not";
  case Kind::And: return "and";
  case Kind::Or: return "or";
  case Kind::Xor: return "xor";
  case Kind::Implies: return "=>";
  case Kind::Eq: return "=";
  case Kind::Ite: return "ite";
  case Kind::BvNot: return "bvnot";
  case Kind::BvAnd: return "bvand";
  case Kind::BvOr: return "bvor";
  case Kind::BvXor: return "bvxor";
  case Kind::BvNeg: return "bvneg";
  case Kind::BvAdd: return "bvadd";
  case Kind::BvSub: return "bvsub";
  case Kind::BvMul: return "bvmul";
  case Kind::BvUdiv: return "bvudiv";
  case Kind::BvSdiv: return "bvsdiv";
  case Kind::BvUrem: return "bvurem";
  case Kind::BvSrem: return "bvsrem";
  case Kind::BvShl: return "bvshl";
  case Kind::BvLshr: return "bvlshr";
  case Kind::BvAshr: return "bvashr";
  case Kind::BvUlt: return "bvult";
  case Kind::BvUle: return "bvule";
  case Kind::BvSlt: return "bvslt";
  case Kind::BvSle: return "bvsle";
  case Kind::Concat: return "concat";
  case Kind::Extract: return "extract";
  case Kind::SignExtend: return "sign_extend";
  case Kind::ZeroExtend: return "zero_extend";
  }
  return "";
}

Sort Sort::bv(unsigned width)
{
  if (width == 0) throw SortError("bit-vector width must be positive");
  Sort s;
  s.width_ = width;
  return s;
}

std::string Sort::to_string() const
{
  return is_bool() ? std::string("Bool") : "(_ BitVec " + std::to_string(width_) + ")";
}

TermTable::TermTable() { nodes_.reserve(1024); }

bool TermTable::is_const(Term t) const
{
  const Kind k = kind(t);
  return k == Kind::BoolConst || k == Kind::BvConst;
}

std::size_t TermTable::hash_node(const TermNode &n)
{
  std::size_t h = static_cast<std::size_t>(n.kind) * 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  mix(n.sort.width());
  for (Term c : n.children) mix(c.id);
  mix(n.attrs.hi);
  mix(n.attrs.lo);
  if (n.kind == Kind::BoolConst) mix(n.bool_value ? 1 : 2);
  if (n.kind == Kind::BvConst) mix(n.value.hash());
  if (n.kind == Kind::Symbol) mix(std::hash<std::string>{}(n.name));
  return h;
}

bool TermTable::same_node(const TermNode &a, const TermNode &b)
{
  return a.kind == b.kind && a.sort == b.sort && a.children == b.children && a.attrs.hi == b.attrs.hi
         && a.attrs.lo == b.attrs.lo && a.bool_value == b.bool_value && a.value == b.value && a.name == b.name;
}

Term TermTable::intern(TermNode node)
{
  const std::size_t h = hash_node(node);
  auto &bucket = buckets_[h];
  for (Term t : bucket)
    if (same_node(nodes_[t.id], node)) return t;
  const Term t{ static_cast<std::uint32_t>(nodes_.size()) };
  nodes_.push_back(std::move(node));
  bucket.push_back(t);
  return t;
}

namespace {

[[noreturn]] void sort_error(Kind k, const std::string &why)
{
  throw SortError(std::string(smtlib_name(k)) + ": " + why);
}

}// namespace

Term TermTable::mk(Kind kind, std::span<const Term> children, Attrs attrs)
{
  for (Term c : children)
    if (!c.valid() || c.id >= nodes_.size()) throw SortError("invalid child term");
  auto arity = [&](std::size_t n) {
    if (children.size() != n) sort_error(kind, "expected " + std::to_string(n) + " arguments");
  };
  auto all_bool = [&] {
    for (Term c : children)
      if (!sort(c).is_bool()) sort_error(kind, "expected Bool arguments");
  };
  auto same_bv = [&] {
    for (Term c : children)
      if (!sort(c).is_bv()) sort_error(kind, "expected bit-vector arguments");
    for (Term c : children)
      if (sort(c) != sort(children[0])) sort_error(kind, "bit-vector width mismatch");
  };

  TermNode n{ kind, Sort::boolean(), std::vector<Term>(children.begin(), children.end()), {}, false, {}, {} };
  switch (kind) {
  case Kind::BoolConst:
  case Kind::BvConst:
  case Kind::Symbol: throw InvalidAttrError("leaf terms are built with mk_bool/mk_const/mk_symbol");
  case Kind::Not:
    arity(1);
    all_bool();
    break;
  case Kind::And:
  case Kind::Or:
    if (children.size() < 2) sort_error(kind, "expected at least 2 arguments");
    all_bool();
    break;
  case Kind::Xor:
  case Kind::Implies:
    arity(2);
    all_bool();
    break;
  case Kind::Eq:
    arity(2);
    if (sort(children[0]) != sort(children[1])) sort_error(kind, "argument sorts differ");
    break;
  case Kind::Ite:
    arity(3);
    if (!sort(children[0]).is_bool()) sort_error(kind, "condition must be Bool");
    if (sort(children[1]) != sort(children[2])) sort_error(kind, "branch sorts differ");
    n.sort = sort(children[1]);
    break;
  case Kind::BvNot:
  case Kind::BvNeg:
    arity(1);
    same_bv();
    n.sort = sort(children[0]);
    break;
  case Kind::BvAnd:
  case Kind::BvOr:
  case Kind::BvXor:
  case Kind::BvAdd:
  case Kind::BvSub:
  case Kind::BvMul:
  case Kind::BvUdiv:
  case Kind::BvSdiv:
  case Kind::BvUrem:
  case Kind::BvSrem:
  case Kind::BvShl:
  case Kind::BvLshr:
  case Kind::BvAshr:
    arity(2);
    same_bv();
    n.sort = sort(children[0]);
    break;
  case Kind::BvUlt:
  case Kind::BvUle:
  case Kind::BvSlt:
  case Kind::BvSle:
    arity(2);
    same_bv();
    break;
  case Kind::Concat:
    arity(2);
    if (!sort(children[0]).is_bv() || !sort(children[1]).is_bv()) sort_error(kind, "expected bit-vector arguments");
    n.sort = Sort::bv(width(children[0]) + width(children[1]));
    break;
  case Kind::Extract:
    arity(1);
    same_bv();
    if (attrs.hi < attrs.lo || attrs.hi >= width(children[0]))
      throw InvalidAttrError("extract indices " + std::to_string(attrs.hi) + " " + std::to_string(attrs.lo)
                             + " invalid for width " + std::to_string(width(children[0])));
    n.sort = Sort::bv(attrs.hi - attrs.lo + 1);
    n.attrs = attrs;
    break;
  case Kind::SignExtend:
  case Kind::ZeroExtend:
    arity(1);
    same_bv();
    n.sort = Sort::bv(width(children[0]) + attrs.hi);
    n.attrs = { attrs.hi, 0 };
    break;
  }
  return intern(std::move(n));
}

Term TermTable::mk_bool(bool value)
{
  TermNode n{ Kind::BoolConst, Sort::boolean(), {}, {}, value, {}, {} };
  return intern(std::move(n));
}

Term TermTable::mk_const(const BvValue &value)
{
  if (value.width() == 0) throw InvalidAttrError("constant without width");
  TermNode n{ Kind::BvConst, Sort::bv(value.width()), {}, {}, false, value, {} };
  return intern(std::move(n));
}

Term TermTable::mk_symbol(std::string_view name, Sort sort)
{
  if (name.empty()) throw InvalidAttrError("empty symbol name");
  std::string key(name);
  if (auto it = symbols_.find(key); it != symbols_.end()) {
    if (this->sort(it->second) != sort)
      throw SortError("symbol '" + key + "' redeclared with sort " + sort.to_string());
    return it->second;
  }
  TermNode n{ Kind::Symbol, sort, {}, {}, false, {}, key };
  const Term t = intern(std::move(n));
  symbols_.emplace(std::move(key), t);
  return t;
}

std::optional<Term> TermTable::find_symbol(std::string_view name) const
{
  if (auto it = symbols_.find(std::string(name)); it != symbols_.end()) return it->second;
  return std::nullopt;
}

std::string TermTable::fresh_name(std::string_view prefix)
{
  unsigned &counter = fresh_counters_[std::string(prefix)];
  for (;;) {
    std::string candidate = std::string(prefix) + "!" + std::to_string(counter++);
    if (!symbols_.contains(candidate)) return candidate;
  }
}

Term TermTable::not_(Term a) { return mk(Kind::Not, { a }); }

Term TermTable::and_(std::span<const Term> xs)
{
  if (xs.empty()) return mk_true();
  if (xs.size() == 1) return xs[0];
  return mk(Kind::And, xs);
}

Term TermTable::or_(std::span<const Term> xs)
{
  if (xs.empty()) return mk_false();
  if (xs.size() == 1) return xs[0];
  return mk(Kind::Or, xs);
}

Term TermTable::bit(Term a, unsigned i) { return eq(extract(i, i, a), mk_const(1, 1)); }

std::string to_string(const Value &v)
{
  if (const bool *b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return std::get<BvValue>(v).to_smtlib();
}

Model Model::restrict_to(std::span<const Term> symbols) const
{
  Model m;
  for (Term s : symbols)
    if (const Value *v = find(s)) m.set(s, *v);
  return m;
}

Evaluator::Evaluator(const TermTable &table, Lookup lookup) : table_(table), lookup_(std::move(lookup)) {}

Evaluator::Evaluator(const TermTable &table, const Model &model)
  : table_(table), lookup_([&model](Term s) -> std::optional<Value> {
      if (const Value *v = model.find(s)) return *v;
      return std::nullopt;
    })
{}

bool Evaluator::eval_bool(Term t) { return std::get<bool>((*this)(t)); }

BvValue Evaluator::eval_bv(Term t) { return std::get<BvValue>((*this)(t)); }

Value Evaluator::operator()(Term root)
{
  if (auto it = cache_.find(root); it != cache_.end()) return it->second;
  // Explicit post-order so deep DAGs do not exhaust the call stack.
  std::vector<std::pair<Term, bool>> stack{ { root, false } };
  while (!stack.empty()) {
    auto [t, expanded] = stack.back();
    stack.pop_back();
    if (cache_.contains(t)) continue;
    if (!expanded) {
      stack.emplace_back(t, true);
      for (Term c : table_.node(t).children)
        if (!cache_.contains(c)) stack.emplace_back(c, false);
      continue;
    }
    cache_.emplace(t, compute(t));
  }
  return cache_.at(root);
}

Value Evaluator::compute(Term t)
{
  const TermNode &n = table_.node(t);
  auto b = [&](std::size_t i) { return std::get<bool>(cache_.at(n.children[i])); };
  auto v = [&](std::size_t i) -> const BvValue & { return std::get<BvValue>(cache_.at(n.children[i])); };
  switch (n.kind) {
  case Kind::BoolConst: return n.bool_value;
  case Kind::BvConst: return n.value;
  case Kind::Symbol: {
    std::optional<Value> val = lookup_(t);
    if (!val) throw UnboundSymbolError("no value for symbol '" + n.name + "'");
    const bool ok = n.sort.is_bool() ? std::holds_alternative<bool>(*val)
                                     : std::holds_alternative<BvValue>(*val)
                                         && std::get<BvValue>(*val).width() == n.sort.width();
    if (!ok) throw SortError("value for symbol '" + n.name + "' has the wrong sort");
    return *val;
  }
  case Kind::Not: return !b(0);
  case Kind::And:
    for (std::size_t i = 0; i < n.children.size(); ++i)
      if (!b(i)) return false;
    return true;
  case Kind::Or:
    for (std::size_t i = 0; i < n.children.size(); ++i)
      if (b(i)) return true;
    return false;
  case Kind::Xor: return b(0) != b(1);
  case Kind::Implies: return !b(0) || b(1);
  case Kind::Eq: return cache_.at(n.children[0]) == cache_.at(n.children[1]);
  case Kind::Ite: return b(0) ? cache_.at(n.children[1]) : cache_.at(n.children[2]);
  case Kind::BvNot: return ~v(0);
  case Kind::BvNeg: return -v(0);
  case Kind::BvAnd: return v(0) & v(1);
  case Kind::BvOr: return v(0) | v(1);
  case Kind::BvXor: return v(0) ^ v(1);
  case Kind::BvAdd: return v(0) + v(1);
  case Kind::BvSub: return v(0) - v(1);
  case Kind::BvMul: return v(0) * v(1);
  case Kind::BvUdiv: return v(0).udiv(v(1));
  case Kind::BvSdiv: return v(0).sdiv(v(1));
  case Kind::BvUrem: return v(0).urem(v(1));
  case Kind::BvSrem: return v(0).srem(v(1));
  case Kind::BvShl: return v(0).shl(v(1));
  case Kind::BvLshr: return v(0).lshr(v(1));
  case Kind::BvAshr: return v(0).ashr(v(1));
  case Kind::BvUlt: return v(0).ult(v(1));
  case Kind::BvUle: return v(0).ule(v(1));
  case Kind::BvSlt: return v(0).slt(v(1));
  case Kind::BvSle: return v(0).sle(v(1));
  case Kind::Concat: return v(0).concat(v(1));
  case Kind::Extract: return v(0).extract(n.attrs.hi, n.attrs.lo);
  case Kind::SignExtend: return v(0).sext(n.attrs.hi);
  case Kind::ZeroExtend: return v(0).zext(n.attrs.hi);
  }
  throw std::logic_error("unhandled term kind");
}

Value eval(const TermTable &table, Term t, const Model &model)
{
  Evaluator ev(table, model);
  return ev(t);
}

Term substitute(TermTable &table, Term root, const std::unordered_map<Term, Term> &map)
{
  for (const auto &[from, to] : map)
    if (table.sort(from) != table.sort(to)) throw SortError("substitution changes the sort of a term");
  if (map.empty()) return root;

  std::unordered_map<Term, Term> done;
  std::vector<std::pair<Term, bool>> stack{ { root, false } };
  while (!stack.empty()) {
    auto [t, expanded] = stack.back();
    stack.pop_back();
    if (done.contains(t)) continue;
    if (auto hit = map.find(t); hit != map.end()) {
      done.emplace(t, hit->second);
      continue;
    }
    const TermNode &n = table.node(t);
    if (n.children.empty()) {
      done.emplace(t, t);
      continue;
    }
    if (!expanded) {
      stack.emplace_back(t, true);
      for (Term c : n.children)
        if (!done.contains(c)) stack.emplace_back(c, false);
      continue;
    }
    std::vector<Term> kids;
    kids.reserve(n.children.size());
    bool changed = false;
    for (Term c : n.children) {
      kids.push_back(done.at(c));
      changed |= kids.back() != c;
    }
    const Kind kind = n.kind;
    const Attrs attrs = n.attrs;
    done.emplace(t, changed ? table.mk(kind, kids, attrs) : t);
  }
  return done.at(root);
}

std::vector<Term> topological_order(const TermTable &table, std::span<const Term> roots)
{
  std::vector<Term> order;
  std::unordered_set<Term> seen;
  for (Term r : roots) {
    std::vector<std::pair<Term, bool>> stack{ { r, false } };
    while (!stack.empty()) {
      auto [t, expanded] = stack.back();
      stack.pop_back();
      if (expanded) {
        order.push_back(t);
        continue;
      }
      if (!seen.insert(t).second) continue;
      stack.emplace_back(t, true);
      const auto &kids = table.node(t).children;
      for (auto it = kids.rbegin(); it != kids.rend(); ++it)
        if (!seen.contains(*it)) stack.emplace_back(*it, false);
    }
  }
  return order;
}

std::vector<Term> collect_symbols(const TermTable &table, std::span<const Term> roots)
{
  std::vector<Term> out;
  for (Term t : topological_order(table, roots))
    if (table.kind(t) == Kind::Symbol) out.push_back(t);
  return out;
}

std::vector<unsigned> collect_widths(const TermTable &table, std::span<const Term> roots)
{
  std::vector<unsigned> widths;
  for (Term t : topological_order(table, roots))
    if (table.sort(t).is_bv()) widths.push_back(table.width(t));
  std::sort(widths.begin(), widths.end());
  widths.erase(std::unique(widths.begin(), widths.end()), widths.end());
  return widths;
}

}// namespace lazybv
