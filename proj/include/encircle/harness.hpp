#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "encircle/controller.hpp"
#include "encircle/geometry.hpp"
#include "encircle/plant.hpp"
#include "encircle/signals.hpp"
#include "encircle/trajectory.hpp"

namespace encircle {

/// Where the controller's range-rate input comes from.
enum class RateSource {
  kWashout,  // washout filter on the (noisy) range measurement
  kExact,    // ground-truth vc cos(phi); idealized, for checking the theory
};

/// Everything needed to reproduce one closed-loop run.
struct Scenario {
  RobotState initial_state{};
  TargetSet targets{{Point2{2.0, 2.0}}};
  RefCommand command = RefCommand::constant(2.0);
  ControllerParams params{};
  double filter_gain = 100.0;  // washout h [1/s]
  NoiseModel noise{};
  double dt = 0.01;
  double t_end = 100.0;
  int log_every = 1;
  RateSource rate_source = RateSource::kWashout;
  /// Largest heading change allowed within one integration step [rad]. When
  /// |u| dt would exceed it, the step is split into equal sub-steps and the
  /// whole loop (measurement, filter, control, plant) runs at the finer rate.
  /// Infinity disables splitting.
  double max_turn_per_step = 0.05;

  void validate() const;
  /// Number of integration steps, floor(t_end / dt).
  std::size_t step_count() const;
  /// Number of records a run produces.
  std::size_t record_count() const;
};

/// Thrown when the simulation state stops being finite.
class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(std::size_t record_index, const std::string& what);
  std::size_t record_index() const { return record_index_; }

 private:
  std::size_t record_index_;
};

TrajectoryLog run(const Scenario& sc);
TrajectoryLog run(const Scenario& sc, const RangeController& law);

/// Condition checks that apply to a scenario: the constant-radius conditions
/// for constant commands, the time-varying ones otherwise.
ConditionReport scenario_conditions(const Scenario& sc);

struct BatchItem {
  std::optional<TrajectoryLog> log;
  std::string error;  // empty on success
};

/// Runs independent scenarios, in parallel when `threads` != 1 (0 = hardware
/// concurrency). Results keep the input order; failures are collected per
/// item and do not stop the batch.
std::vector<BatchItem> run_batch(const std::vector<Scenario>& scenarios,
                                 unsigned threads = 0);

struct InteriorEquilibriumProbe {
  double d_star = 0.0;
  double phi_rate_residual = 0.0;  // phi' evaluated at (d*, -pi/2)
  bool escaped = false;
  std::optional<double> escape_time;
  double max_excursion = 0.0;  // max |(d - d*, phi + pi/2)| over the run
};

struct InteriorEquilibriumReport {
  bool gain_condition = false;  // k1 k2 >= 8 vc^2 as stated for existence
  std::vector<InteriorEquilibriumProbe> probes;
  bool has_equilibrium() const { return !probes.empty(); }
};

/// Locates the equilibria (d*, -pi/2) inside the orbit and launches a run from
/// (d* + perturbation, -pi/2) for each, checking that the state leaves a 0.1
/// neighbourhood of the equilibrium.
InteriorEquilibriumReport stress_interior_equilibrium(
    const ControllerParams& p, double rc, double perturbation = 1e-3,
    double t_end = 30.0);

}  // namespace encircle
