#include "lazybv/bitblast.hpp"

#include "lazybv/errors.hpp"

#include <algorithm>
#include <cstdint>

namespace lazybv {

using sat::Lit;

BitBlaster::BitBlaster(const TermTable &table, sat::ClauseSink &sink) : table_(table), sink_(sink)
{
  true_ = sink_.new_var();
  sink_.add_clause({ true_ });
}

Lit BitBlaster::and2(Lit a, Lit b)
{
  if (a == -true_ || b == -true_ || a == -b) return -true_;
  if (a == true_ || a == b) return b;
  if (b == true_) return a;
  const Lit g = fresh();
  sink_.add_clause({ -g, a });
  sink_.add_clause({ -g, b });
  sink_.add_clause({ g, -a, -b });
  return g;
}

Lit BitBlaster::xor2(Lit a, Lit b)
{
  if (a == -true_) return b;
  if (a == true_) return -b;
  if (b == -true_) return a;
  if (b == true_) return -a;
  if (a == b) return -true_;
  if (a == -b) return true_;
  const Lit g = fresh();
  sink_.add_clause({ -g, a, b });
  sink_.add_clause({ -g, -a, -b });
  sink_.add_clause({ g, -a, b });
  sink_.add_clause({ g, a, -b });
  return g;
}

Lit BitBlaster::ite(Lit c, Lit t, Lit e)
{
  if (c == true_) return t;
  if (c == -true_) return e;
  if (t == e) return t;
  if (t == -e) return xor2(c, e);
  if (t == true_) return or2(c, e);
  if (t == -true_) return and2(-c, e);
  if (e == true_) return or2(-c, t);
  if (e == -true_) return and2(c, t);
  const Lit g = fresh();
  sink_.add_clause({ -c, -t, g });
  sink_.add_clause({ -c, t, -g });
  sink_.add_clause({ c, -e, g });
  sink_.add_clause({ c, e, -g });
  sink_.add_clause({ -t, -e, g });
  sink_.add_clause({ t, e, -g });
  return g;
}

Lit BitBlaster::and_all(const std::vector<Lit> &xs)
{
  std::vector<Lit> ins;
  ins.reserve(xs.size());
  for (Lit x : xs) {
    if (x == -true_) return -true_;
    if (x != true_) ins.push_back(x);
  }
  std::sort(ins.begin(), ins.end());
  ins.erase(std::unique(ins.begin(), ins.end()), ins.end());
  for (Lit x : ins)
    if (std::binary_search(ins.begin(), ins.end(), -x)) return -true_;
  if (ins.empty()) return true_;
  if (ins.size() == 1) return ins[0];
  const Lit g = fresh();
  std::vector<Lit> big{ g };
  for (Lit x : ins) {
    sink_.add_clause({ -g, x });
    big.push_back(-x);
  }
  sink_.add_clause(big);
  return g;
}

Lit BitBlaster::equal(const Bits &a, const Bits &b)
{
  std::vector<Lit> eqs(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) eqs[i] = -xor2(a[i], b[i]);
  return and_all(eqs);
}

namespace {

struct Majority
{
  BitBlaster &bb;
  sat::ClauseSink &sink;
  Lit t;

  Lit operator()(Lit x, Lit y, Lit z) const
  {
    if (x == t) return bb.or2(y, z);
    if (x == -t) return bb.and2(y, z);
    if (y == t) return bb.or2(x, z);
    if (y == -t) return bb.and2(x, z);
    if (z == t) return bb.or2(x, y);
    if (z == -t) return bb.and2(x, y);
    if (x == y || x == z) return x;
    if (y == z) return y;
    if (x == -y) return z;
    if (x == -z || y == -z) return x == -z ? y : x;
    const Lit g = sink.new_var();
    sink.add_clause({ -x, -y, g });
    sink.add_clause({ -x, -z, g });
    sink.add_clause({ -y, -z, g });
    sink.add_clause({ x, y, -g });
    sink.add_clause({ x, z, -g });
    sink.add_clause({ y, z, -g });
    return g;
  }
};

}// namespace

Bits BitBlaster::add(const Bits &a, const Bits &b, Lit carry_in)
{
  const Majority maj{ *this, sink_, true_ };
  Bits sum(a.size());
  Lit c = carry_in;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum[i] = xor2(xor2(a[i], b[i]), c);
    if (i + 1 < a.size()) c = maj(a[i], b[i], c);
  }
  return sum;
}

Bits BitBlaster::neg(const Bits &a)
{
  Bits inv(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) inv[i] = -a[i];
  return add(inv, Bits(a.size(), -true_), true_);
}

Bits BitBlaster::mul(const Bits &a, const Bits &b)
{
  const std::size_t w = a.size();
  Bits acc(w, -true_);
  for (std::size_t i = 0; i < w; ++i) {
    if (b[i] == -true_) continue;
    Bits pp(w, -true_);
    for (std::size_t j = i; j < w; ++j) pp[j] = and2(b[i], a[j - i]);
    acc = add(acc, pp, -true_);
  }
  return acc;
}

Lit BitBlaster::ult(const Bits &a, const Bits &b)
{
  // a < b iff a + ~b + 1 produces no carry out.
  const Majority maj{ *this, sink_, true_ };
  Lit c = true_;
  for (std::size_t i = 0; i < a.size(); ++i) c = maj(a[i], -b[i], c);
  return -c;
}

Lit BitBlaster::slt(const Bits &a, const Bits &b)
{
  Bits fa = a;
  Bits fb = b;
  fa.back() = -fa.back();
  fb.back() = -fb.back();
  return ult(fa, fb);
}

std::pair<Bits, Bits> BitBlaster::udivrem(const Bits &a, const Bits &b)
{
  auto key = std::make_pair(a, b);
  if (auto it = divrem_cache_.find(key); it != divrem_cache_.end()) return it->second;

  const std::size_t w = a.size();
  std::vector<Lit> bs(b.begin(), b.end());
  for (Lit &l : bs) l = -l;
  const Lit nonzero = -and_all(bs);

  std::pair<Bits, Bits> out;
  if (nonzero == -true_) {
    out = { Bits(w, true_), a };
  } else {
    Bits q(w);
    Bits r(w);
    for (auto &l : q) l = fresh();
    for (auto &l : r) l = fresh();
    // q * b + r = a over 2w bits, where neither step can wrap.
    auto widen = [&](const Bits &x) {
      Bits y = x;
      y.resize(2 * w, -true_);
      return y;
    };
    const Lit exact = equal(add(mul(widen(q), widen(b)), widen(r), -true_), widen(a));
    const Lit below = ult(r, b);
    sink_.add_clause({ -nonzero, exact });
    sink_.add_clause({ -nonzero, below });
    if (nonzero != true_) {
      for (Lit l : q) sink_.add_clause({ nonzero, l });
      sink_.add_clause({ nonzero, equal(r, a) });
    }
    out = { std::move(q), std::move(r) };
  }
  divrem_cache_.emplace(std::move(key), out);
  return out;
}

Bits BitBlaster::shift(Kind kind, const Bits &a, const Bits &amount)
{
  const std::size_t w = a.size();
  const Lit fill = kind == Kind::BvAshr ? a[w - 1] : -true_;
  Bits res = a;
  std::vector<Lit> too_far;
  for (std::size_t k = 0; k < amount.size(); ++k) {
    if (k >= 63 || (std::uint64_t{ 1 } << k) >= w) {
      too_far.push_back(amount[k]);
      continue;
    }
    const std::size_t s = std::size_t{ 1 } << k;
    Bits next(w);
    for (std::size_t i = 0; i < w; ++i) {
      Lit moved;
      if (kind == Kind::BvShl) moved = i >= s ? res[i - s] : -true_;
      else moved = i + s < w ? res[i + s] : fill;
      next[i] = ite(amount[k], moved, res[i]);
    }
    res = std::move(next);
  }
  std::vector<Lit> none;
  for (Lit l : too_far) none.push_back(-l);
  const Lit in_range = and_all(none);
  for (auto &l : res) l = ite(in_range, l, fill);
  return res;
}

void BitBlaster::blast(Term root)
{
  auto done = [this](Term t) { return table_.sort(t).is_bool() ? bools_.contains(t) : bits_.contains(t); };
  if (done(root)) return;
  std::vector<std::pair<Term, bool>> stack{ { root, false } };
  while (!stack.empty()) {
    auto [t, expanded] = stack.back();
    stack.pop_back();
    if (done(t)) continue;
    if (expanded) {
      encode(t);
      continue;
    }
    stack.push_back({ t, true });
    for (Term c : table_.node(t).children)
      if (!done(c)) stack.push_back({ c, false });
  }
}

void BitBlaster::encode(Term t)
{
  const TermNode &n = table_.node(t);
  auto B = [this](Term c) -> const Bits & { return bits_.at(c); };
  auto L = [this](Term c) { return bools_.at(c); };
  const auto &ch = n.children;
  const unsigned w = n.sort.width();

  if (n.sort.is_bool()) {
    Lit out = 0;
    switch (n.kind) {
    case Kind::BoolConst: out = n.bool_value ? true_ : -true_; break;
    case Kind::Symbol: out = fresh(); break;
    case Kind::Not: out = -L(ch[0]); break;
    case Kind::And:
    case Kind::Or: {
      std::vector<Lit> xs;
      const bool is_or = n.kind == Kind::Or;
      for (Term c : ch) xs.push_back(is_or ? -L(c) : L(c));
      out = is_or ? -and_all(xs) : and_all(xs);
      break;
    }
    case Kind::Xor: out = xor2(L(ch[0]), L(ch[1])); break;
    case Kind::Implies: out = or2(-L(ch[0]), L(ch[1])); break;
    case Kind::Eq:
      out = table_.sort(ch[0]).is_bool() ? -xor2(L(ch[0]), L(ch[1])) : equal(B(ch[0]), B(ch[1]));
      break;
    case Kind::Ite: out = ite(L(ch[0]), L(ch[1]), L(ch[2])); break;
    case Kind::BvUlt: out = ult(B(ch[0]), B(ch[1])); break;
    case Kind::BvUle: out = -ult(B(ch[1]), B(ch[0])); break;
    case Kind::BvSlt: out = slt(B(ch[0]), B(ch[1])); break;
    case Kind::BvSle: out = -slt(B(ch[1]), B(ch[0])); break;
    default: throw SortError("unexpected Bool node kind");
    }
    bools_.emplace(t, out);
    return;
  }

  Bits out;
  auto bitwise = [&](auto f) {
    const Bits &a = B(ch[0]);
    const Bits &b = B(ch[1]);
    out.resize(w);
    for (unsigned i = 0; i < w; ++i) out[i] = f(a[i], b[i]);
  };
  auto signed_divrem = [&](bool want_rem) {
    const Bits &a = B(ch[0]);
    const Bits &b = B(ch[1]);
    const Lit sa = a[w - 1];
    const Lit sb = b[w - 1];
    auto abs = [&](const Bits &x, Lit s) {
      const Bits nx = neg(x);
      Bits r(w);
      for (unsigned i = 0; i < w; ++i) r[i] = ite(s, nx[i], x[i]);
      return r;
    };
    auto [q, r] = udivrem(abs(a, sa), abs(b, sb));
    const Bits &v = want_rem ? r : q;
    const Lit flip = want_rem ? sa : xor2(sa, sb);
    const Bits nv = neg(v);
    out.resize(w);
    for (unsigned i = 0; i < w; ++i) out[i] = ite(flip, nv[i], v[i]);
  };

  switch (n.kind) {
  case Kind::BvConst:
    out.resize(w);
    for (unsigned i = 0; i < w; ++i) out[i] = n.value.bit(i) ? true_ : -true_;
    break;
  case Kind::Symbol:
    out.resize(w);
    for (auto &l : out) l = fresh();
    break;
  case Kind::Ite: {
    const Lit c = L(ch[0]);
    const Bits &a = B(ch[1]);
    const Bits &b = B(ch[2]);
    out.resize(w);
    for (unsigned i = 0; i < w; ++i) out[i] = ite(c, a[i], b[i]);
    break;
  }
  case Kind::BvNot:
    out = B(ch[0]);
    for (auto &l : out) l = -l;
    break;
  case Kind::BvAnd: bitwise([this](Lit a, Lit b) { return and2(a, b); }); break;
  case Kind::BvOr: bitwise([this](Lit a, Lit b) { return or2(a, b); }); break;
  case Kind::BvXor: bitwise([this](Lit a, Lit b) { return xor2(a, b); }); break;
  case Kind::BvNeg: out = neg(B(ch[0])); break;
  case Kind::BvAdd: out = add(B(ch[0]), B(ch[1]), -true_); break;
  case Kind::BvSub: {
    Bits nb = B(ch[1]);
    for (auto &l : nb) l = -l;
    out = add(B(ch[0]), nb, true_);
    break;
  }
  case Kind::BvMul: out = mul(B(ch[0]), B(ch[1])); break;
  case Kind::BvUdiv: out = udivrem(B(ch[0]), B(ch[1])).first; break;
  case Kind::BvUrem: out = udivrem(B(ch[0]), B(ch[1])).second; break;
  case Kind::BvSdiv: signed_divrem(false); break;
  case Kind::BvSrem: signed_divrem(true); break;
  case Kind::BvShl:
  case Kind::BvLshr:
  case Kind::BvAshr: out = shift(n.kind, B(ch[0]), B(ch[1])); break;
  case Kind::Concat:
    out = B(ch[1]);
    out.insert(out.end(), B(ch[0]).begin(), B(ch[0]).end());
    break;
  case Kind::Extract: {
    const Bits &a = B(ch[0]);
    out.assign(a.begin() + n.attrs.lo, a.begin() + n.attrs.hi + 1);
    break;
  }
  case Kind::SignExtend:
    out = B(ch[0]);
    out.resize(w, out.back());
    break;
  case Kind::ZeroExtend:
    out = B(ch[0]);
    out.resize(w, -true_);
    break;
  default: throw SortError("unexpected bit-vector node kind");
  }
  bits_.emplace(t, std::move(out));
}

Lit BitBlaster::blast_bool(Term t)
{
  if (!table_.sort(t).is_bool()) throw SortError("expected a Bool term");
  blast(t);
  return bools_.at(t);
}

const Bits &BitBlaster::blast_bv(Term t)
{
  if (!table_.sort(t).is_bv()) throw SortError("expected a bit-vector term");
  blast(t);
  return bits_.at(t);
}

void BitBlaster::assert_term(Term t) { sink_.add_clause({ blast_bool(t) }); }

const Bits *BitBlaster::find_bits(Term t) const
{
  auto it = bits_.find(t);
  return it == bits_.end() ? nullptr : &it->second;
}

std::optional<Lit> BitBlaster::find_lit(Term t) const
{
  auto it = bools_.find(t);
  if (it == bools_.end()) return std::nullopt;
  return it->second;
}

BvValue read_bits(const Bits &bits, const std::function<bool(Lit)> &value)
{
  BvValue v = BvValue::from_u64(static_cast<unsigned>(bits.size()), 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (value(bits[i])) v.set_bit(static_cast<unsigned>(i), true);
  return v;
}

}// namespace lazybv
