#pragma once

#include <cmath>

namespace coexsim {

/// Planar position in meters.
struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

inline double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Axis-aligned test bed anchored at the origin.
struct Bed {
  double width_m = 10.0;
  double height_m = 10.0;

  bool contains(const Position& p) const {
    return p.x >= 0.0 && p.x <= width_m && p.y >= 0.0 && p.y <= height_m;
  }
  Position center() const { return {width_m / 2, height_m / 2}; }

  friend bool operator==(const Bed&, const Bed&) = default;
};

}  // namespace coexsim
