#include "encircle/plant.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace encircle {

TargetSet::TargetSet(std::vector<Point2> positions)
    : positions_(std::move(positions)) {
  if (positions_.empty()) {
    throw std::invalid_argument("target set must not be empty");
  }
  for (const auto& p : positions_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument("target positions must be finite");
    }
  }
}

std::size_t TargetSet::nearest(const Point2& p) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    const double d = distance(p, positions_[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

double TargetSet::min_distance(const Point2& p) const {
  return distance(p, positions_[nearest(p)]);
}

std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double GaussianSource::uniform(std::uint64_t counter) const {
  const std::uint64_t bits =
      splitmix64(seed_ + (counter + 1) * 0x9E3779B97F4A7C15ULL);
  // (0, 1]: never zero, so the logarithm below stays finite.
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

double GaussianSource::standard_normal(std::uint64_t draw) const {
  const double u1 = uniform(2 * draw);
  const double u2 = uniform(2 * draw + 1);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

RobotState step(const RobotState& s, double u, double vc, double dt) {
  if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.theta) ||
      !std::isfinite(u) || !std::isfinite(vc) || !std::isfinite(dt)) {
    throw std::invalid_argument("plant step: non-finite input");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("plant step: dt must be > 0");
  if (!(vc > 0.0)) throw std::invalid_argument("plant step: vc must be > 0");

  // theta(t) is linear within the step, so the four stages only differ in
  // the heading at which the velocity is evaluated.
  const double th1 = s.theta;
  const double th2 = s.theta + 0.5 * dt * u;
  const double th4 = s.theta + dt * u;
  const double cx = (std::cos(th1) + 4.0 * std::cos(th2) + std::cos(th4)) / 6.0;
  const double cy = (std::sin(th1) + 4.0 * std::sin(th2) + std::sin(th4)) / 6.0;

  RobotState next;
  next.x = s.x + dt * vc * cx;
  next.y = s.y + dt * vc * cy;
  next.theta = wrap_angle(th4);
  return next;
}

double measure(const RobotState& state, const TargetSet& targets,
               const NoiseModel& noise, std::uint64_t cursor) {
  const double d = targets.min_distance(state.position());
  if (noise.sigma == 0.0) return d;
  return d + noise.sigma * GaussianSource(noise.seed).standard_normal(cursor);
}

PolarState true_polar(const RobotState& state, const Point2& target) {
  const double dx = state.x - target.x;
  const double dy = state.y - target.y;
  if (dx == 0.0 && dy == 0.0) {
    throw std::domain_error("true_polar: robot coincides with the target");
  }
  PolarState p;
  p.d = std::hypot(dx, dy);
  p.eta = std::atan2(dy, dx);
  p.phi = wrap_angle(state.theta - p.eta);
  return p;
}

}  // namespace encircle
