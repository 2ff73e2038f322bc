#pragma once

#include <cmath>
#include <numbers>

namespace encircle {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  if (w > std::numbers::pi) w -= 2.0 * std::numbers::pi;
  return w;
}

/// World-frame pose of the unicycle. theta is kept in (-pi, pi].
struct RobotState {
  double x = 0.0;      // [m]
  double y = 0.0;      // [m]
  double theta = 0.0;  // heading [rad]

  Point2 position() const { return {x, y}; }
};

/// Target-relative coordinates of the robot.
///   d   - distance to the target [m]
///   phi - heading relative to the target-to-robot direction, (-pi, pi]
///   eta - bearing of the robot seen from the target, (-pi, pi]
struct PolarState {
  double d = 0.0;
  double phi = 0.0;
  double eta = 0.0;
};

}  // namespace encircle
