#pragma once

#include <algorithm>
#include <bit>
#include <charconv>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "varkit/error.hpp"

namespace varkit {

inline constexpr unsigned kMaxDyadicLevel = 62;
inline constexpr unsigned kDefaultDepth = 20;

/// A number numerator / 2^level in [0, 1], stored exactly.
///
/// Representations need not be canonical; comparison and equality are by
/// value. All arithmetic happens on integers at a common level.
class DyadicRational {
 public:
  constexpr DyadicRational() = default;

  DyadicRational(std::uint64_t numerator, unsigned level) : num_(numerator), level_(level) {
    if (level > kMaxDyadicLevel)
      throw Error(Errc::depth_exceeded, "dyadic level " + std::to_string(level) + " exceeds 62");
    if (numerator > (std::uint64_t{1} << level))
      throw Error(Errc::invalid_value, "dyadic value above 1");
  }

  static DyadicRational zero() { return {}; }
  static DyadicRational one() { return {1, 0}; }

  std::uint64_t numerator() const { return num_; }
  unsigned level() const { return level_; }

  /// Smallest level at which the value is representable.
  unsigned canonical_level() const {
    if (num_ == 0) return 0;
    const unsigned tz = static_cast<unsigned>(std::countr_zero(num_));
    return tz >= level_ ? 0 : level_ - tz;
  }

  DyadicRational canonical() const {
    const unsigned l = canonical_level();
    return {num_ >> (level_ - l), l};
  }

  /// Numerator when written at `level`; requires level >= canonical_level().
  std::uint64_t scaled_to(unsigned level) const {
    if (level >= level_) return num_ << (level - level_);
    return num_ >> (level_ - level);
  }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(std::uint64_t{1} << level_); }

  friend DyadicRational operator+(const DyadicRational& a, const DyadicRational& b) {
    const unsigned l = std::max(a.level_, b.level_);
    return {a.scaled_to(l) + b.scaled_to(l), l};
  }

  friend DyadicRational operator-(const DyadicRational& a, const DyadicRational& b) {
    const unsigned l = std::max(a.level_, b.level_);
    const auto x = a.scaled_to(l), y = b.scaled_to(l);
    if (y > x) throw Error(Errc::invalid_value, "negative dyadic difference");
    return {x - y, l};
  }

  friend bool operator==(const DyadicRational& a, const DyadicRational& b) {
    const unsigned l = std::max(a.level_, b.level_);
    return a.scaled_to(l) == b.scaled_to(l);
  }

  friend std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b) {
    const unsigned l = std::max(a.level_, b.level_);
    return a.scaled_to(l) <=> b.scaled_to(l);
  }

  /// "num/2^level" in canonical form ("0" and "1" for the endpoints).
  std::string to_string() const {
    const auto c = canonical();
    if (c.level_ == 0) return std::to_string(c.num_);
    return std::to_string(c.num_) + "/" + std::to_string(std::uint64_t{1} << c.level_);
  }

  /// Accepts "n", "n/d" with d a power of two, or "n/2^k".
  static DyadicRational parse(std::string_view text) {
    auto to_u64 = [&](std::string_view s) {
      std::uint64_t v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw Error(Errc::parse_error, "not a dyadic fraction: '" + std::string(text) + "'");
      return v;
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return {to_u64(text), 0};
    const auto num = to_u64(text.substr(0, slash));
    auto den_text = text.substr(slash + 1);
    if (den_text.starts_with("2^")) {
      const auto k = to_u64(den_text.substr(2));
      if (k > kMaxDyadicLevel) throw Error(Errc::depth_exceeded, "exponent too large in '" + std::string(text) + "'");
      return {num, static_cast<unsigned>(k)};
    }
    const auto den = to_u64(den_text);
    if (den == 0 || !std::has_single_bit(den))
      throw Error(Errc::non_dyadic_mass, "denominator is not a power of two in '" + std::string(text) + "'");
    return {num, static_cast<unsigned>(std::countr_zero(den))};
  }

  /// Exact conversion of a double; fails unless the value is k/2^level with level <= max_level.
  static DyadicRational from_double(double value, unsigned max_level) {
    if (!(value >= 0.0 && value <= 1.0))
      throw Error(Errc::invalid_value, "value outside [0,1]: " + std::to_string(value));
    const double scaled = value * static_cast<double>(std::uint64_t{1} << max_level);
    const auto num = static_cast<std::uint64_t>(scaled);
    if (static_cast<double>(num) != scaled)
      throw Error(Errc::non_dyadic_mass, "value is not dyadic of level <= " + std::to_string(max_level));
    return DyadicRational(num, max_level).canonical();
  }

 private:
  std::uint64_t num_ = 0;
  unsigned level_ = 0;
};

/// The dyadic interval [(j-1)/2^m, j/2^m) of [0,1), with 1 <= j <= 2^m.
class DyadicInterval {
 public:
  DyadicInterval(unsigned level, std::uint64_t index) : level_(level), index_(index) {
    if (level > kMaxDyadicLevel) throw Error(Errc::depth_exceeded, "interval level exceeds 62");
    if (index < 1 || index > (std::uint64_t{1} << level))
      throw Error(Errc::invalid_value, "index " + std::to_string(index) + " outside [1, 2^" + std::to_string(level) + "]");
  }

  static DyadicInterval root() { return {0, 1}; }

  unsigned level() const { return level_; }
  std::uint64_t index() const { return index_; }

  // The root counts as a left sibling: j = 1 is odd.
  bool is_left_sibling() const { return index_ % 2 == 1; }
  bool is_right_sibling() const { return !is_left_sibling(); }

  DyadicRational lower() const { return {index_ - 1, level_}; }
  DyadicRational upper() const { return {index_, level_}; }
  DyadicRational length() const { return {1, level_}; }

  DyadicInterval parent() const {
    if (level_ == 0) throw Error(Errc::root_has_no_parent, "I^0_1 has no parent");
    return {level_ - 1, (index_ + 1) / 2};
  }

  std::pair<DyadicInterval, DyadicInterval> children() const {
    return {DyadicInterval(level_ + 1, 2 * index_ - 1), DyadicInterval(level_ + 1, 2 * index_)};
  }

  /// True when the interval lies inside [a, b).
  bool inside(const DyadicRational& a, const DyadicRational& b) const { return a <= lower() && upper() <= b; }

  friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
  friend auto operator<=>(const DyadicInterval& x, const DyadicInterval& y) {
    if (auto c = x.lower() <=> y.lower(); c != 0) return c;
    return x.level_ <=> y.level_;
  }

 private:
  unsigned level_;
  std::uint64_t index_;
};

inline std::pair<DyadicRational, DyadicRational> interval_bounds(const DyadicInterval& interval) {
  return {interval.lower(), interval.upper()};
}

inline DyadicInterval parent(const DyadicInterval& interval) { return interval.parent(); }

/// The maximal dyadic intervals contained in [a, b), sorted by left endpoint.
///
/// Greedy walk: from the cursor, emit the largest aligned dyadic block that
/// still fits below b. Each emitted block is maximal because its parent either
/// starts before the cursor (alignment) or overruns b (size). At most two
/// blocks per level are emitted, one of each parity.
inline std::vector<DyadicInterval> decompose_interval(const DyadicRational& a, const DyadicRational& b,
                                                      unsigned max_level = kDefaultDepth) {
  if (!(a < b)) throw Error(Errc::invalid_range, "need a < b, got [" + a.to_string() + ", " + b.to_string() + ")");
  const unsigned level = std::max(a.canonical_level(), b.canonical_level());
  if (level > max_level)
    throw Error(Errc::depth_exceeded,
                "endpoints need level " + std::to_string(level) + " > " + std::to_string(max_level));

  std::vector<DyadicInterval> out;
  std::uint64_t cursor = a.scaled_to(level);
  const std::uint64_t end = b.scaled_to(level);
  while (cursor < end) {
    unsigned shift = cursor == 0 ? level : static_cast<unsigned>(std::countr_zero(cursor));
    while ((std::uint64_t{1} << shift) > end - cursor) --shift;
    out.emplace_back(level - shift, (cursor >> shift) + 1);
    cursor += std::uint64_t{1} << shift;
  }
  return out;
}

}  // namespace varkit
