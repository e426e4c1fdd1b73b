#ifndef LAZYBV_BV_VALUE_HPP
#define LAZYBV_BV_VALUE_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lazybv {

/**
 * Fixed-width bit string with SMT-LIB QF_BV semantics.
 *
 * Every value carries both readings: unsigned (0 .. 2^w-1) and two's
 * complement signed. Arithmetic is modulo 2^width; binary operations require
 * equal widths and throw std::invalid_argument otherwise.
 */
class BvValue
{
public:
  BvValue() = default;
  explicit BvValue(unsigned width);

  static BvValue from_u64(unsigned width, std::uint64_t value);
  static BvValue from_i64(unsigned width, std::int64_t value);
  static BvValue ones(unsigned width);
  static BvValue power_of_two(unsigned width, unsigned exponent);
  /// Width is the number of digits.
  static BvValue from_binary(std::string_view digits);
  static BvValue from_hex(std::string_view digits);
  static BvValue from_decimal(unsigned width, std::string_view digits);

  [[nodiscard]] unsigned width() const { return width_; }
  [[nodiscard]] bool bit(unsigned i) const;
  void set_bit(unsigned i, bool value);
  [[nodiscard]] bool msb() const { return bit(width_ - 1); }
  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] bool is_one() const;
  [[nodiscard]] bool is_ones() const;
  /// Index of the most significant set bit; -1 for zero.
  [[nodiscard]] int highest_set_bit() const;

  /// Low 64 bits of the unsigned reading.
  [[nodiscard]] std::uint64_t to_u64() const;
  /// Signed reading; requires width <= 64.
  [[nodiscard]] std::int64_t to_i64() const;

  [[nodiscard]] std::string to_binary() const;
  [[nodiscard]] std::string to_hex() const;
  /// `#x...` when the width is a multiple of 4, else `#b...`.
  [[nodiscard]] std::string to_smtlib() const;
  [[nodiscard]] std::string to_decimal() const;

  friend BvValue operator~(const BvValue &a);
  friend BvValue operator&(const BvValue &a, const BvValue &b);
  friend BvValue operator|(const BvValue &a, const BvValue &b);
  friend BvValue operator^(const BvValue &a, const BvValue &b);
  friend BvValue operator+(const BvValue &a, const BvValue &b);
  friend BvValue operator-(const BvValue &a, const BvValue &b);
  friend BvValue operator-(const BvValue &a);
  friend BvValue operator*(const BvValue &a, const BvValue &b);
  friend bool operator==(const BvValue &a, const BvValue &b) = default;

  [[nodiscard]] BvValue udiv(const BvValue &d) const;
  [[nodiscard]] BvValue urem(const BvValue &d) const;
  [[nodiscard]] BvValue sdiv(const BvValue &d) const;
  [[nodiscard]] BvValue srem(const BvValue &d) const;
  [[nodiscard]] BvValue smod(const BvValue &d) const;
  [[nodiscard]] BvValue shl(const BvValue &amount) const;
  [[nodiscard]] BvValue lshr(const BvValue &amount) const;
  [[nodiscard]] BvValue ashr(const BvValue &amount) const;
  [[nodiscard]] BvValue shl(unsigned amount) const;
  [[nodiscard]] BvValue lshr(unsigned amount) const;

  [[nodiscard]] bool ult(const BvValue &b) const;
  [[nodiscard]] bool ule(const BvValue &b) const { return !b.ult(*this); }
  [[nodiscard]] bool slt(const BvValue &b) const;
  [[nodiscard]] bool sle(const BvValue &b) const { return !b.slt(*this); }

  [[nodiscard]] BvValue extract(unsigned hi, unsigned lo) const;
  /// `*this` becomes the high part.
  [[nodiscard]] BvValue concat(const BvValue &low) const;
  [[nodiscard]] BvValue zext(unsigned extra) const;
  [[nodiscard]] BvValue sext(unsigned extra) const;
  /// Two's complement magnitude, same width (the minimum maps to itself).
  [[nodiscard]] BvValue abs() const { return msb() ? -*this : *this; }

  [[nodiscard]] std::size_t hash() const;

private:
  void normalize();
  void require_same_width(const BvValue &b) const;
  static void divmod(const BvValue &n, const BvValue &d, BvValue &q, BvValue &r);

  unsigned width_ = 0;
  std::vector<std::uint64_t> words_;
};

}// namespace lazybv

#endif
