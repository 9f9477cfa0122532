#pragma once

#include <cstdint>
#include <compare>

#include "spot/error.hpp"

namespace spot {

/// Raised on time arithmetic overflow or out-of-range time quantities.
class TimeError : public Error {
 public:
  using Error::Error;
};

namespace detail {

[[noreturn]] inline void time_overflow() { throw TimeError("time arithmetic overflow"); }

inline int64_t add_i64(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r)) time_overflow();
  return r;
}

inline int64_t sub_i64(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) time_overflow();
  return r;
}

inline int64_t mul_i64(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) time_overflow();
  return r;
}

}  // namespace detail

/// Signed span of time held as integer microseconds.
///
/// All arithmetic is overflow-checked; millisecond/second conversions
/// truncate toward zero.
class TimeSpan {
 public:
  constexpr TimeSpan() : us_(0) {}

  static constexpr TimeSpan micros(int64_t us) { return TimeSpan(us); }
  static TimeSpan millis(int64_t ms) { return TimeSpan(detail::mul_i64(ms, 1000)); }
  static TimeSpan seconds(int64_t s) { return TimeSpan(detail::mul_i64(s, 1'000'000)); }
  static TimeSpan minutes(int64_t m) { return TimeSpan(detail::mul_i64(m, 60'000'000)); }
  static TimeSpan hours(int64_t h) { return TimeSpan(detail::mul_i64(h, 3'600'000'000)); }

  constexpr int64_t total_micros() const { return us_; }
  constexpr int64_t total_millis() const { return us_ / 1000; }
  constexpr int64_t total_seconds() const { return us_ / 1'000'000; }
  constexpr double millis_f() const { return static_cast<double>(us_) / 1e3; }
  constexpr double seconds_f() const { return static_cast<double>(us_) / 1e6; }

  TimeSpan operator+(TimeSpan o) const { return TimeSpan(detail::add_i64(us_, o.us_)); }
  TimeSpan operator-(TimeSpan o) const { return TimeSpan(detail::sub_i64(us_, o.us_)); }
  TimeSpan operator-() const { return TimeSpan(detail::sub_i64(0, us_)); }
  TimeSpan& operator+=(TimeSpan o) {
    us_ = detail::add_i64(us_, o.us_);
    return *this;
  }
  TimeSpan& operator-=(TimeSpan o) {
    us_ = detail::sub_i64(us_, o.us_);
    return *this;
  }
  TimeSpan operator*(int64_t f) const { return TimeSpan(detail::mul_i64(us_, f)); }
  TimeSpan operator/(int64_t d) const {
    if (d == 0) throw TimeError("division of a time span by zero");
    return TimeSpan(us_ / d);
  }

  TimeSpan abs() const { return us_ < 0 ? -*this : *this; }

  constexpr auto operator<=>(const TimeSpan&) const = default;

 private:
  constexpr explicit TimeSpan(int64_t us) : us_(us) {}

  int64_t us_;
};

/// An instant on some clock, held as integer microseconds since that
/// clock's arbitrary epoch.
class TimePoint {
 public:
  constexpr TimePoint() : us_(0) {}

  static constexpr TimePoint from_micros(int64_t us) { return TimePoint(us); }

  constexpr int64_t micros() const { return us_; }
  constexpr int64_t millis() const { return us_ / 1000; }

  TimePoint operator+(TimeSpan d) const {
    return TimePoint(detail::add_i64(us_, d.total_micros()));
  }
  TimePoint operator-(TimeSpan d) const {
    return TimePoint(detail::sub_i64(us_, d.total_micros()));
  }
  TimeSpan operator-(TimePoint o) const {
    return TimeSpan::micros(detail::sub_i64(us_, o.us_));
  }

  constexpr auto operator<=>(const TimePoint&) const = default;

 private:
  constexpr explicit TimePoint(int64_t us) : us_(us) {}

  int64_t us_;
};

/// Clock rate error in signed parts per billion.
///
/// Values at or beyond +/-10^7 ppb (1%) are rejected: hardware that far off
/// is broken, and rate estimates that large are discarded as invalid.
class Skew {
 public:
  static constexpr int64_t kMaxAbsPpb = 10'000'000;

  constexpr Skew() : ppb_(0) {}

  static Skew parts_per_billion(int64_t ppb) {
    if (ppb <= -kMaxAbsPpb || ppb >= kMaxAbsPpb) throw TimeError("skew out of range");
    return Skew(ppb);
  }

  /// Rate implied by an offset change over a baseline, rounded to the
  /// nearest ppb (ties away from zero). Throws on a zero baseline or when
  /// the result falls outside the valid range.
  static Skew from_drift(TimeSpan offset_delta, TimeSpan baseline) {
    if (baseline.total_micros() == 0) throw TimeError("skew baseline is zero");
    __int128 num = static_cast<__int128>(offset_delta.total_micros()) * 1'000'000'000;
    __int128 den = baseline.total_micros();
    if (den < 0) {
      num = -num;
      den = -den;
    }
    __int128 half = den / 2;
    __int128 q = num >= 0 ? (num + half) / den : (num - half) / den;
    if (q <= -kMaxAbsPpb || q >= kMaxAbsPpb) throw TimeError("skew estimate out of range");
    return Skew(static_cast<int64_t>(q));
  }

  constexpr int64_t ppb() const { return ppb_; }

  /// Offset accumulated at this rate over dt, truncated toward zero.
  TimeSpan drift_over(TimeSpan dt) const {
    __int128 p = static_cast<__int128>(ppb_) * dt.total_micros();
    return TimeSpan::micros(static_cast<int64_t>(p / 1'000'000'000));
  }

  constexpr auto operator<=>(const Skew&) const = default;

 private:
  constexpr explicit Skew(int64_t ppb) : ppb_(ppb) {}

  int64_t ppb_;
};

}  // namespace spot
