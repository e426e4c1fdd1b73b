#ifndef LAZYBV_DEADLINE_HPP
#define LAZYBV_DEADLINE_HPP

#include <chrono>
#include <limits>

namespace lazybv {

/// Wall-clock budget shared by all phases of one solving session.
class Deadline
{
public:
  using Clock = std::chrono::steady_clock;

  static Deadline never() { return Deadline{ Clock::time_point::max() }; }
  static Deadline after(double seconds)
  {
    if (seconds <= 0) return Deadline{ Clock::now() };
    if (seconds > 1e9) return never();
    return Deadline{ Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds)) };
  }

  [[nodiscard]] bool expired() const { return end_ != Clock::time_point::max() && Clock::now() >= end_; }
  [[nodiscard]] bool unbounded() const { return end_ == Clock::time_point::max(); }
  /// Seconds left, clamped at zero; +inf when unbounded.
  [[nodiscard]] double remaining_seconds() const
  {
    if (unbounded()) return std::numeric_limits<double>::infinity();
    const auto left = std::chrono::duration<double>(end_ - Clock::now()).count();
    return left > 0 ? left : 0.0;
  }

private:
  explicit Deadline(Clock::time_point end) : end_(end) {}
  Clock::time_point end_;
};

}// namespace lazybv

#endif
