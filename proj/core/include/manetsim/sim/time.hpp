#pragma once

#include <cmath>
#include <compare>
#include <cstdint>

namespace manet::sim {

/// Simulation time as an integer microsecond count since run start.
/// Integer representation keeps event ordering exact and replayable;
/// floating point appears only at the edges (config, reporting).
struct SimTime {
  std::uint64_t us = 0;

  static constexpr SimTime micros(std::uint64_t v) { return SimTime{v}; }
  static constexpr SimTime millis(std::uint64_t v) { return SimTime{v * 1000}; }
  static SimTime seconds(double s) {
    return SimTime{static_cast<std::uint64_t>(std::llround(s * 1e6))};
  }

  double as_seconds() const { return static_cast<double>(us) * 1e-6; }

  auto operator<=>(const SimTime&) const = default;

  SimTime operator+(SimTime other) const { return SimTime{us + other.us}; }
  SimTime& operator+=(SimTime other) {
    us += other.us;
    return *this;
  }
  /// Saturating difference: never wraps below zero.
  SimTime operator-(SimTime other) const {
    return SimTime{us >= other.us ? us - other.us : 0};
  }
};

inline constexpr SimTime kTimeZero{0};

}  // namespace manet::sim
