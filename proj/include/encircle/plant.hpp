#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "encircle/geometry.hpp"

namespace encircle {

/// Stationary targets. The range sensor reports the distance to the nearest.
class TargetSet {
 public:
  explicit TargetSet(std::vector<Point2> positions);

  const std::vector<Point2>& positions() const { return positions_; }
  std::size_t size() const { return positions_.size(); }
  const Point2& operator[](std::size_t i) const { return positions_[i]; }

  /// Index of the nearest target; ties go to the lowest index.
  std::size_t nearest(const Point2& p) const;
  double min_distance(const Point2& p) const;

 private:
  std::vector<Point2> positions_;
};

/// Additive white Gaussian range noise, omega ~ N(0, sigma^2).
struct NoiseModel {
  double sigma = 0.0;  // [m]
  std::uint64_t seed = 0;
};

/// Counter-based standard normal source.
///
/// Draw k uses two uniforms from SplitMix64 evaluated at counters 2k and 2k+1
/// of the stream keyed by the seed, combined with the Box-Muller cosine
/// branch:
///   u_i = ((splitmix64(seed + (i+1) * 0x9E3779B97F4A7C15) >> 11) + 1) * 2^-53
///   z_k = sqrt(-2 ln u_{2k}) * cos(2 pi u_{2k+1})
/// The sequence depends only on (seed, k), so it is reproducible across
/// platforms and languages and needs no mutable generator state.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : seed_(seed) {}

  double uniform(std::uint64_t counter) const;
  double standard_normal(std::uint64_t draw) const;

 private:
  std::uint64_t seed_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// One classical RK4 step of the unicycle
///   x' = vc cos(theta), y' = vc sin(theta), theta' = u
/// with u held over the step. The returned heading is wrapped.
RobotState step(const RobotState& state, double u, double vc, double dt);

/// Range measurement: min over targets of the Euclidean distance plus the
/// noise draw at `cursor` (no draw is consumed when sigma == 0).
double measure(const RobotState& state, const TargetSet& targets,
               const NoiseModel& noise, std::uint64_t cursor);

/// Ground-truth polar coordinates with respect to one target.
/// Throws std::domain_error when the robot sits on the target.
PolarState true_polar(const RobotState& state, const Point2& target);

}  // namespace encircle
