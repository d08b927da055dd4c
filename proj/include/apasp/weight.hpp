#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace apasp {

using Vertex = std::uint32_t;

/// Exact arc/path weight: a scaled non-negative integer, or infinity.
/// Finite arc weights are strictly positive; path weights add exactly.
class Weight {
 public:
  constexpr Weight() : v_(kInfValue) {}
  constexpr explicit Weight(std::int64_t v) : v_(v) {}

  static constexpr Weight infinity() { return Weight(); }
  static constexpr Weight zero() { return Weight(0); }

  constexpr bool is_infinite() const { return v_ == kInfValue; }
  constexpr bool is_finite() const { return v_ != kInfValue; }
  constexpr std::int64_t value() const { return v_; }

  friend constexpr bool operator==(Weight a, Weight b) = default;
  friend constexpr auto operator<=>(Weight a, Weight b) = default;  // inf sorts last

  /// Checked addition; infinity absorbs, finite overflow throws.
  friend Weight operator+(Weight a, Weight b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    std::int64_t r;
    if (__builtin_add_overflow(a.v_, b.v_, &r) || r == kInfValue)
      throw std::overflow_error("weight addition overflow");
    return Weight(r);
  }

  std::string str() const { return is_infinite() ? "inf" : std::to_string(v_); }

 private:
  static constexpr std::int64_t kInfValue = std::numeric_limits<std::int64_t>::max();
  std::int64_t v_;
};

constexpr Weight kInfinity = Weight::infinity();

/// Internal-inconsistency fault: a structural invariant of the tuple system
/// broke (count underflow, missing resident, bad center mass). Never clamped.
class InconsistencyError : public std::logic_error {
 public:
  explicit InconsistencyError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace apasp
