#pragma once

#include <optional>
#include <string>
#include <vector>

#include "encircle/signals.hpp"

namespace encircle {

/// Gains and safeguards of the range-only backstepping law.
struct ControllerParams {
  double vc = 0.5;     // forward speed [m/s]
  double k1 = 20.0;    // [1/s]
  double k2 = 0.45;    // [m/s]
  double k3 = 2.0;     // [m]
  double eps1 = 0.01;  // distance floor [m]
  double eps2 = 0.01;  // alpha floor, in (0, 1)
  std::optional<double> u_max;  // turn-rate bound [rad/s]

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

/// Intermediate quantities of one control evaluation.
struct ControlDiag {
  double alpha = 1.0;
  double e1 = 0.0;       // d_used - r
  double e2 = 0.0;       // xi - s
  double s = 0.0;        // virtual guidance command -k2 sat(e1/k3) + r_dot
  double sat_arg = 0.0;  // e1 / k3
  bool clamped_d = false;
  bool clamped_alpha = false;
  bool clamped_u = false;
};

struct ControlOutput {
  double u = 0.0;
  ControlDiag diag;
};

double sat(double eta);

/// alpha = sqrt(max(vc^2 - xi^2, 0)) / vc, floored at eps2.
double compute_alpha(double xi, double vc, double eps2);

/// u = vc a / d + (k1 (xi - r_dot + k2 sat((d - r)/k3)) - r_ddot) / (vc a)
/// with d floored at eps1, a = compute_alpha(xi), and optional clipping to
/// [-u_max, u_max]. Throws std::runtime_error on a non-finite result.
ControlOutput compute_u(double d_meas, double xi, const RefSample& ref,
                        const ControllerParams& p);

/// Constant-command form of compute_u; bitwise equal to
/// compute_u(d_meas, xi, {rc, 0, 0}, p).
ControlOutput compute_u_constant(double d_meas, double xi, double rc,
                                 const ControllerParams& p);

struct ConditionCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ConditionReport {
  std::vector<ConditionCheck> checks;
  bool all_passed() const;
};

/// 0 < k2 < vc and k3 == rc (relative tolerance 1e-12).
ConditionReport check_constant_conditions(const ControllerParams& p, double rc);

/// k1 > k2/k3, k1 (vc - k2 - rv) > ra, k1 (vc^2 - rv^2) > rv ra.
ConditionReport check_timevarying_conditions(const ControllerParams& p,
                                             double rv, double ra);

/// Pluggable range-only control law: (d_meas, xi, ref, t) -> u.
class RangeController {
 public:
  virtual ~RangeController() = default;
  virtual ControlOutput operator()(double d_meas, double xi,
                                   const RefSample& ref, double t) const = 0;
};

/// The backstepping law. Uses the constant-command entry point whenever the
/// command it was built for is constant.
class BacksteppingController final : public RangeController {
 public:
  BacksteppingController(ControllerParams params, const RefCommand& command);

  ControlOutput operator()(double d_meas, double xi, const RefSample& ref,
                           double t) const override;

  const ControllerParams& params() const { return params_; }

 private:
  ControllerParams params_;
  std::optional<double> constant_rc_;
};

}  // namespace encircle
