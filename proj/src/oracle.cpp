#include "lazybv/backend.hpp"
#include "lazybv/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>

namespace lazybv {

namespace {

std::uint64_t mask(unsigned w) { return w >= 64 ? ~std::uint64_t{ 0 } : (std::uint64_t{ 1 } << w) - 1; }

struct Instr
{
  Kind kind;
  unsigned width;
  /// Width of the first operand (signed ops, extensions, concat).
  unsigned arg_width;
  std::vector<std::uint32_t> args;
  /// Extract bounds; for Concat `hi` is the width of the low part.
  unsigned hi;
  unsigned lo;
  std::uint32_t out;
};

// Plain uint64 semantics of every operator, written independently of BvValue.
std::uint64_t run(const Instr &in, const std::vector<std::uint64_t> &v)
{
  auto a = [&](std::size_t i) { return v[in.args[i]]; };
  const unsigned w = in.width;
  const std::uint64_t m = mask(w);
  const unsigned aw = in.arg_width;
  const std::uint64_t am = mask(aw);
  auto msb = [&](std::uint64_t x) { return ((x >> (aw - 1)) & 1U) != 0; };
  auto neg = [&](std::uint64_t x) { return (~x + 1) & am; };
  auto udiv = [&](std::uint64_t x, std::uint64_t y) { return y == 0 ? am : x / y; };
  auto urem = [&](std::uint64_t x, std::uint64_t y) { return y == 0 ? x : x % y; };
  auto flip = [&](std::uint64_t x) { return x ^ (std::uint64_t{ 1 } << (aw - 1)); };

  switch (in.kind) {
  case Kind::Not: return a(0) ^ 1U;
  case Kind::And:
    for (std::size_t i = 0; i < in.args.size(); ++i)
      if (a(i) == 0) return 0;
    return 1;
  case Kind::Or:
    for (std::size_t i = 0; i < in.args.size(); ++i)
      if (a(i) != 0) return 1;
    return 0;
  case Kind::Xor: return a(0) ^ a(1);
  case Kind::Implies: return (a(0) == 0 || a(1) != 0) ? 1 : 0;
  case Kind::Eq: return a(0) == a(1) ? 1 : 0;
  case Kind::Ite: return a(0) != 0 ? a(1) : a(2);
  case Kind::BvNot: return ~a(0) & m;
  case Kind::BvAnd: return a(0) & a(1);
  case Kind::BvOr: return a(0) | a(1);
  case Kind::BvXor: return a(0) ^ a(1);
  case Kind::BvNeg: return neg(a(0));
  case Kind::BvAdd: return (a(0) + a(1)) & m;
  case Kind::BvSub: return (a(0) - a(1)) & m;
  case Kind::BvMul: return (a(0) * a(1)) & m;
  case Kind::BvUdiv: return udiv(a(0), a(1));
  case Kind::BvUrem: return urem(a(0), a(1));
  case Kind::BvSdiv:
  case Kind::BvSrem: {
    const bool sx = msb(a(0));
    const bool sy = msb(a(1));
    const std::uint64_t x = sx ? neg(a(0)) : a(0);
    const std::uint64_t y = sy ? neg(a(1)) : a(1);
    if (in.kind == Kind::BvSdiv) {
      const std::uint64_t q = udiv(x, y);
      return sx != sy ? neg(q) : q;
    }
    const std::uint64_t r = urem(x, y);
    return sx ? neg(r) : r;
  }
  case Kind::BvShl: return a(1) >= w ? 0 : (a(0) << a(1)) & m;
  case Kind::BvLshr: return a(1) >= w ? 0 : a(0) >> a(1);
  case Kind::BvAshr: {
    const bool s = msb(a(0));
    if (a(1) >= w) return s ? m : 0;
    std::uint64_t r = a(0) >> a(1);
    if (s) r |= m & ~(m >> a(1));
    return r;
  }
  case Kind::BvUlt: return a(0) < a(1) ? 1 : 0;
  case Kind::BvUle: return a(0) <= a(1) ? 1 : 0;
  case Kind::BvSlt: return flip(a(0)) < flip(a(1)) ? 1 : 0;
  case Kind::BvSle: return flip(a(0)) <= flip(a(1)) ? 1 : 0;
  case Kind::Concat: return (a(0) << in.hi) | a(1);
  case Kind::Extract: return (a(0) >> in.lo) & m;
  case Kind::SignExtend: return msb(a(0)) ? (a(0) | (m & ~am)) : a(0);
  case Kind::ZeroExtend: return a(0);
  default: break;
  }
  throw SortError("oracle: unexpected node kind");
}

}// namespace

struct OracleBackend::Impl
{
  explicit Impl(unsigned bits) : max_bits(bits) {}

  unsigned max_bits;
  std::vector<Term> conjuncts;
  std::unordered_set<Term> seen_conjuncts;
  std::unordered_map<Term, std::uint64_t> witness;
  std::uint64_t leaves = 0;

  void add_conjuncts(const TermTable &table, Term t)
  {
    std::vector<Term> stack{ t };
    while (!stack.empty()) {
      Term c = stack.back();
      stack.pop_back();
      const TermNode &n = table.node(c);
      if (n.kind == Kind::And) {
        for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
      } else if (!(n.kind == Kind::BoolConst && n.bool_value) && seen_conjuncts.insert(c).second) {
        conjuncts.push_back(c);
      }
    }
  }

  Result check(const TermTable &table, const Deadline &deadline);
};

Result OracleBackend::Impl::check(const TermTable &table, const Deadline &deadline)
{
  witness.clear();
  leaves = 0;

  // Slots: one per reachable node.
  std::vector<Term> order = topological_order(table, conjuncts);
  std::unordered_map<Term, std::uint32_t> slot;
  for (Term t : order) slot.emplace(t, static_cast<std::uint32_t>(slot.size()));
  std::vector<std::uint64_t> values(order.size(), 0);

  // Symbols of each conjunct.
  std::vector<Term> symbols;
  std::vector<std::vector<std::size_t>> conj_syms(conjuncts.size());
  std::unordered_map<Term, std::size_t> sym_index;
  for (Term t : order) {
    if (table.kind(t) != Kind::Symbol) continue;
    if (table.width(t) > 64) throw OracleCapacityError("oracle: width above 64");
    sym_index.emplace(t, symbols.size());
    symbols.push_back(t);
  }
  std::vector<std::vector<std::size_t>> node_syms(order.size());
  for (Term t : order) {
    auto &mine = node_syms[slot[t]];
    if (table.kind(t) == Kind::Symbol) mine.push_back(sym_index[t]);
    for (Term c : table.node(t).children) {
      const auto &theirs = node_syms[slot[c]];
      mine.insert(mine.end(), theirs.begin(), theirs.end());
    }
    std::sort(mine.begin(), mine.end());
    mine.erase(std::unique(mine.begin(), mine.end()), mine.end());
  }
  unsigned total_bits = 0;
  for (Term s : symbols) total_bits += std::max(1U, table.width(s));
  if (total_bits > max_bits)
    throw OracleCapacityError("oracle: " + std::to_string(total_bits) + " free bits exceed the bound of " + std::to_string(max_bits));
  for (std::size_t i = 0; i < conjuncts.size(); ++i) conj_syms[i] = node_syms[slot[conjuncts[i]]];

  // Greedy order: next symbol completes the most conjuncts, then fewest bits.
  const std::size_t n = symbols.size();
  std::vector<std::size_t> depth_of(n, SIZE_MAX);
  std::vector<std::size_t> seq;
  std::vector<std::size_t> missing(conjuncts.size());
  for (std::size_t i = 0; i < conjuncts.size(); ++i) missing[i] = conj_syms[i].size();
  while (seq.size() < n) {
    std::size_t best = SIZE_MAX;
    long best_score = -1;
    for (std::size_t s = 0; s < n; ++s) {
      if (depth_of[s] != SIZE_MAX) continue;
      long score = 0;
      for (std::size_t i = 0; i < conjuncts.size(); ++i)
        if (missing[i] == 1 && std::binary_search(conj_syms[i].begin(), conj_syms[i].end(), s)) score += 1000;
        else if (missing[i] > 0 && std::binary_search(conj_syms[i].begin(), conj_syms[i].end(), s)) score += 1;
      score = score * 128 - std::max(1U, table.width(symbols[s]));
      if (best == SIZE_MAX || score > best_score) {
        best = s;
        best_score = score;
      }
    }
    depth_of[best] = seq.size();
    seq.push_back(best);
    for (std::size_t i = 0; i < conjuncts.size(); ++i)
      if (std::binary_search(conj_syms[i].begin(), conj_syms[i].end(), best)) --missing[i];
  }

  // Bucket instructions and conjunct checks by the depth at which they become ready.
  std::vector<std::vector<Instr>> program(n + 1);
  std::vector<std::vector<std::uint32_t>> checks(n + 1);
  auto ready = [&](std::uint32_t s) {
    std::size_t d = 0;
    for (std::size_t sym : node_syms[s]) d = std::max(d, depth_of[sym] + 1);
    return d;
  };
  for (Term t : order) {
    const TermNode &node = table.node(t);
    const std::uint32_t s = slot[t];
    if (node.kind == Kind::Symbol) continue;
    if (node.kind == Kind::BoolConst || node.kind == Kind::BvConst) {
      if (node.sort.width() > 64) throw OracleCapacityError("oracle: width above 64");
      values[s] = node.kind == Kind::BoolConst ? (node.bool_value ? 1 : 0) : node.value.to_u64();
      continue;
    }
    Instr in{ node.kind, node.sort.width(), 0, {}, node.attrs.hi, node.attrs.lo, s };
    for (Term c : node.children) in.args.push_back(slot[c]);
    in.arg_width = table.width(node.children[0]);
    if (in.width > 64 || in.arg_width > 64) throw OracleCapacityError("oracle: width above 64");
    if (node.kind == Kind::Concat) in.hi = table.width(node.children[1]);
    program[ready(s)].push_back(std::move(in));
  }
  for (Term c : conjuncts) checks[ready(slot[c])].push_back(slot[c]);

  auto level_ok = [&](std::size_t d) {
    for (const Instr &in : program[d]) values[in.out] = run(in, values);
    for (std::uint32_t c : checks[d])
      if (values[c] == 0) return false;
    return true;
  };
  if (!level_ok(0)) return Result::Unsat;

  std::vector<std::uint64_t> limit(n);
  for (std::size_t d = 0; d < n; ++d) {
    const unsigned w = table.width(symbols[seq[d]]);
    limit[d] = w == 0 ? 1 : mask(w);
  }
  std::vector<std::uint32_t> sym_slot(n);
  for (std::size_t d = 0; d < n; ++d) sym_slot[d] = slot[symbols[seq[d]]];

  // Iterative DFS: cur[d] is the value tried at depth d.
  std::vector<std::uint64_t> cur(n, 0);
  std::size_t d = 0;
  bool fresh = true;
  while (true) {
    if (d == n) {
      for (std::size_t k = 0; k < n; ++k) witness[symbols[seq[k]]] = cur[k];
      return Result::Sat;
    }
    if (fresh) cur[d] = 0;
    else if (cur[d] == limit[d]) {
      if (d == 0) return Result::Unsat;
      --d;
      fresh = false;
      continue;
    } else {
      ++cur[d];
    }
    values[sym_slot[d]] = cur[d];
    if ((++leaves & 0xfffU) == 0 && deadline.expired()) return Result::Unknown;
    if (level_ok(d + 1)) {
      ++d;
      fresh = true;
    } else {
      fresh = false;
    }
  }
}

OracleBackend::OracleBackend(TermTable &table, unsigned max_free_bits)
  : Backend(table), impl_(std::make_unique<Impl>(max_free_bits))
{}

OracleBackend::~OracleBackend() = default;

std::uint64_t OracleBackend::visited() const { return impl_->leaves; }

void OracleBackend::do_assert(Term t) { impl_->add_conjuncts(table_, t); }

Result OracleBackend::do_check(const Deadline &deadline) { return impl_->check(table_, deadline); }

Model OracleBackend::do_get_values(std::span<const Term> symbols)
{
  Model m;
  for (Term s : symbols) {
    auto it = impl_->witness.find(s);
    const std::uint64_t v = it == impl_->witness.end() ? 0 : it->second;
    if (table_.sort(s).is_bool()) m.set(s, v != 0);
    else m.set(s, BvValue::from_u64(table_.width(s), v));
  }
  return m;
}

}// namespace lazybv
