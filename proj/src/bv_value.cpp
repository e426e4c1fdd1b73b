#include "lazybv/bv_value.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace lazybv {

namespace {

unsigned word_count(unsigned width) { return (width + 63) / 64; }

}// namespace

BvValue::BvValue(unsigned width) : width_(width), words_(word_count(width), 0)
{
  if (width == 0) throw std::invalid_argument("bit-vector width must be positive");
}

BvValue BvValue::from_u64(unsigned width, std::uint64_t value)
{
  BvValue v(width);
  v.words_[0] = value;
  v.normalize();
  return v;
}

BvValue BvValue::from_i64(unsigned width, std::int64_t value)
{
  BvValue v(width);
  const auto raw = static_cast<std::uint64_t>(value);
  const std::uint64_t fill = value < 0 ? ~std::uint64_t{ 0 } : 0;
  v.words_[0] = raw;
  for (std::size_t i = 1; i < v.words_.size(); ++i) v.words_[i] = fill;
  v.normalize();
  return v;
}

BvValue BvValue::ones(unsigned width)
{
  BvValue v(width);
  std::fill(v.words_.begin(), v.words_.end(), ~std::uint64_t{ 0 });
  v.normalize();
  return v;
}

BvValue BvValue::power_of_two(unsigned width, unsigned exponent)
{
  BvValue v(width);
  if (exponent < width) v.set_bit(exponent, true);
  return v;
}

BvValue BvValue::from_binary(std::string_view digits)
{
  BvValue v(static_cast<unsigned>(digits.size()));
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const char c = digits[digits.size() - 1 - i];
    if (c != '0' && c != '1') throw std::invalid_argument("invalid binary digit");
    v.set_bit(static_cast<unsigned>(i), c == '1');
  }
  return v;
}

BvValue BvValue::from_hex(std::string_view digits)
{
  BvValue v(static_cast<unsigned>(digits.size() * 4));
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const char c = digits[digits.size() - 1 - i];
    unsigned nibble = 0;
    if (c >= '0' && c <= '9') nibble = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f') nibble = static_cast<unsigned>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F') nibble = static_cast<unsigned>(c - 'A' + 10);
    else throw std::invalid_argument("invalid hexadecimal digit");
    for (unsigned b = 0; b < 4; ++b) v.set_bit(static_cast<unsigned>(i * 4 + b), ((nibble >> b) & 1U) != 0);
  }
  return v;
}

BvValue BvValue::from_decimal(unsigned width, std::string_view digits)
{
  if (digits.empty()) throw std::invalid_argument("empty decimal literal");
  // Accumulate at a width where 10 is representable, then truncate.
  const unsigned wide = std::max(width, 8U);
  BvValue v(wide);
  const BvValue ten = from_u64(wide, 10);
  for (char c : digits) {
    if (c < '0' || c > '9') throw std::invalid_argument("invalid decimal digit");
    v = v * ten + from_u64(wide, static_cast<std::uint64_t>(c - '0'));
  }
  return v.extract(width - 1, 0);
}

bool BvValue::bit(unsigned i) const
{
  if (i >= width_) throw std::out_of_range("bit index out of range");
  return ((words_[i / 64] >> (i % 64)) & 1U) != 0;
}

void BvValue::set_bit(unsigned i, bool value)
{
  if (i >= width_) throw std::out_of_range("bit index out of range");
  const std::uint64_t mask = std::uint64_t{ 1 } << (i % 64);
  if (value) words_[i / 64] |= mask;
  else words_[i / 64] &= ~mask;
}

bool BvValue::is_zero() const
{
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

bool BvValue::is_one() const
{
  if (words_.empty() || words_[0] != 1) return false;
  return std::all_of(words_.begin() + 1, words_.end(), [](std::uint64_t w) { return w == 0; });
}

bool BvValue::is_ones() const { return *this == ones(width_); }

int BvValue::highest_set_bit() const
{
  for (std::size_t i = words_.size(); i-- > 0;) {
    if (words_[i] != 0) return static_cast<int>(i * 64 + 63 - static_cast<unsigned>(std::countl_zero(words_[i])));
  }
  return -1;
}

std::uint64_t BvValue::to_u64() const { return words_.at(0); }

std::int64_t BvValue::to_i64() const
{
  if (width_ > 64) throw std::out_of_range("signed reading needs width <= 64");
  std::uint64_t raw = words_[0];
  if (width_ < 64 && msb()) raw |= ~std::uint64_t{ 0 } << width_;
  return static_cast<std::int64_t>(raw);
}

std::string BvValue::to_binary() const
{
  std::string out(width_, '0');
  for (unsigned i = 0; i < width_; ++i)
    if (bit(i)) out[width_ - 1 - i] = '1';
  return out;
}

std::string BvValue::to_hex() const
{
  static constexpr char digits[] = "0123456789abcdef";
  const unsigned n = (width_ + 3) / 4;
  std::string out(n, '0');
  for (unsigned d = 0; d < n; ++d) {
    unsigned nibble = 0;
    for (unsigned b = 0; b < 4 && d * 4 + b < width_; ++b) nibble |= static_cast<unsigned>(bit(d * 4 + b)) << b;
    out[n - 1 - d] = digits[nibble];
  }
  return out;
}

std::string BvValue::to_smtlib() const { return width_ % 4 == 0 ? "#x" + to_hex() : "#b" + to_binary(); }

std::string BvValue::to_decimal() const
{
  if (is_zero()) return "0";
  std::string out;
  BvValue rest = *this;
  // Widen so that 10 is representable at small widths.
  if (width_ < 8) rest = rest.zext(8 - width_);
  const BvValue ten = from_u64(rest.width(), 10);
  while (!rest.is_zero()) {
    BvValue q(rest.width());
    BvValue r(rest.width());
    divmod(rest, ten, q, r);
    out.push_back(static_cast<char>('0' + r.to_u64()));
    rest = q;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

void BvValue::normalize()
{
  const unsigned tail = width_ % 64;
  if (tail != 0) words_.back() &= (std::uint64_t{ 1 } << tail) - 1;
}

void BvValue::require_same_width(const BvValue &b) const
{
  if (width_ != b.width_) throw std::invalid_argument("bit-vector width mismatch");
}

BvValue operator~(const BvValue &a)
{
  BvValue r = a;
  for (auto &w : r.words_) w = ~w;
  r.normalize();
  return r;
}

BvValue operator&(const BvValue &a, const BvValue &b)
{
  a.require_same_width(b);
  BvValue r = a;
  for (std::size_t i = 0; i < r.words_.size(); ++i) r.words_[i] &= b.words_[i];
  return r;
}

BvValue operator|(const BvValue &a, const BvValue &b)
{
  a.require_same_width(b);
  BvValue r = a;
  for (std::size_t i = 0; i < r.words_.size(); ++i) r.words_[i] |= b.words_[i];
  return r;
}

BvValue operator^(const BvValue &a, const BvValue &b)
{
  a.require_same_width(b);
  BvValue r = a;
  for (std::size_t i = 0; i < r.words_.size(); ++i) r.words_[i] ^= b.words_[i];
  return r;
}

BvValue operator+(const BvValue &a, const BvValue &b)
{
  a.require_same_width(b);
  BvValue r(a.width_);
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < r.words_.size(); ++i) {
    const std::uint64_t s = a.words_[i] + b.words_[i];
    const std::uint64_t c1 = s < a.words_[i] ? 1 : 0;
    r.words_[i] = s + carry;
    const std::uint64_t c2 = r.words_[i] < s ? 1 : 0;
    carry = c1 | c2;
  }
  r.normalize();
  return r;
}

BvValue operator-(const BvValue &a) { return ~a + BvValue::from_u64(a.width_, 1); }

BvValue operator-(const BvValue &a, const BvValue &b) { return a + (-b); }

BvValue operator*(const BvValue &a, const BvValue &b)
{
  a.require_same_width(b);
  // Schoolbook over 32-bit limbs, truncated to the word count.
  const std::size_t n = a.words_.size();
  std::vector<std::uint32_t> x(2 * n);
  std::vector<std::uint32_t> y(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    x[2 * i] = static_cast<std::uint32_t>(a.words_[i]);
    x[2 * i + 1] = static_cast<std::uint32_t>(a.words_[i] >> 32);
    y[2 * i] = static_cast<std::uint32_t>(b.words_[i]);
    y[2 * i + 1] = static_cast<std::uint32_t>(b.words_[i] >> 32);
  }
  std::vector<std::uint32_t> acc(2 * n, 0);
  for (std::size_t i = 0; i < 2 * n; ++i) {
    std::uint64_t carry = 0;
    for (std::size_t j = 0; i + j < 2 * n; ++j) {
      const std::uint64_t t = static_cast<std::uint64_t>(x[i]) * y[j] + acc[i + j] + carry;
      acc[i + j] = static_cast<std::uint32_t>(t);
      carry = t >> 32;
    }
  }
  BvValue r(a.width_);
  for (std::size_t i = 0; i < n; ++i) r.words_[i] = acc[2 * i] | (static_cast<std::uint64_t>(acc[2 * i + 1]) << 32);
  r.normalize();
  return r;
}

void BvValue::divmod(const BvValue &n, const BvValue &d, BvValue &q, BvValue &r)
{
  // Restoring long division, one bit at a time. d != 0.
  q = BvValue(n.width_);
  r = BvValue(n.width_);
  for (unsigned i = n.width_; i-- > 0;) {
    const bool top = r.msb();
    r = r.shl(1U);
    r.set_bit(0, n.bit(i));
    if (top || !r.ult(d)) {
      r = r - d;
      q.set_bit(i, true);
    }
  }
}

BvValue BvValue::udiv(const BvValue &d) const
{
  require_same_width(d);
  if (d.is_zero()) return ones(width_);
  BvValue q(width_);
  BvValue r(width_);
  divmod(*this, d, q, r);
  return q;
}

BvValue BvValue::urem(const BvValue &d) const
{
  require_same_width(d);
  if (d.is_zero()) return *this;
  BvValue q(width_);
  BvValue r(width_);
  divmod(*this, d, q, r);
  return r;
}

BvValue BvValue::sdiv(const BvValue &d) const
{
  const bool ns = msb();
  const bool nt = d.msb();
  const BvValue q = abs().udiv(d.abs());
  return ns != nt ? -q : q;
}

BvValue BvValue::srem(const BvValue &d) const
{
  const BvValue r = abs().urem(d.abs());
  return msb() ? -r : r;
}

BvValue BvValue::smod(const BvValue &d) const
{
  const BvValue u = abs().urem(d.abs());
  if (u.is_zero()) return u;
  const bool ns = msb();
  const bool nt = d.msb();
  if (!ns && !nt) return u;
  if (ns && !nt) return -u + d;
  if (!ns && nt) return u + d;
  return -u;
}

namespace {

/// Shift amount as an unsigned count, saturated at `width`.
unsigned shift_amount(const BvValue &amount, unsigned width)
{
  if (amount.highest_set_bit() >= 32) return width;
  const std::uint64_t a = amount.to_u64();
  return a >= width ? width : static_cast<unsigned>(a);
}

}// namespace

BvValue BvValue::shl(unsigned amount) const
{
  BvValue r(width_);
  for (unsigned i = amount; i < width_; ++i) r.set_bit(i, bit(i - amount));
  return r;
}

BvValue BvValue::lshr(unsigned amount) const
{
  BvValue r(width_);
  for (unsigned i = 0; i + amount < width_; ++i) r.set_bit(i, bit(i + amount));
  return r;
}

BvValue BvValue::shl(const BvValue &amount) const
{
  require_same_width(amount);
  return shl(shift_amount(amount, width_));
}

BvValue BvValue::lshr(const BvValue &amount) const
{
  require_same_width(amount);
  return lshr(shift_amount(amount, width_));
}

BvValue BvValue::ashr(const BvValue &amount) const
{
  require_same_width(amount);
  const unsigned s = shift_amount(amount, width_);
  BvValue r = lshr(s);
  if (msb())
    for (unsigned i = width_ - s; i < width_; ++i) r.set_bit(i, true);
  return r;
}

bool BvValue::ult(const BvValue &b) const
{
  require_same_width(b);
  for (std::size_t i = words_.size(); i-- > 0;) {
    if (words_[i] != b.words_[i]) return words_[i] < b.words_[i];
  }
  return false;
}

bool BvValue::slt(const BvValue &b) const
{
  require_same_width(b);
  if (msb() != b.msb()) return msb();
  return ult(b);
}

BvValue BvValue::extract(unsigned hi, unsigned lo) const
{
  if (hi < lo || hi >= width_) throw std::out_of_range("invalid extract range");
  BvValue r(hi - lo + 1);
  for (unsigned i = lo; i <= hi; ++i) r.set_bit(i - lo, bit(i));
  return r;
}

BvValue BvValue::concat(const BvValue &low) const
{
  BvValue r(width_ + low.width_);
  for (unsigned i = 0; i < low.width_; ++i) r.set_bit(i, low.bit(i));
  for (unsigned i = 0; i < width_; ++i) r.set_bit(low.width_ + i, bit(i));
  return r;
}

BvValue BvValue::zext(unsigned extra) const
{
  if (extra == 0) return *this;
  return BvValue(extra).concat(*this);
}

BvValue BvValue::sext(unsigned extra) const
{
  if (extra == 0) return *this;
  return (msb() ? ones(extra) : BvValue(extra)).concat(*this);
}

std::size_t BvValue::hash() const
{
  std::size_t h = width_ * 0x9e3779b97f4a7c15ULL;
  for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}// namespace lazybv
