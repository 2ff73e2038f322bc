#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "encircle/controller.hpp"
#include "encircle/signals.hpp"
#include "encircle/trajectory.hpp"

namespace encircle {

/// Deviation from the reference trajectory: z1 = d - r, z2 = d' - r'.
struct ErrorState {
  double z1 = 0.0;
  double z2 = 0.0;

  double norm() const;
};

/// Linearized error dynamics z' = A z inside the unsaturated band |z1| < k3.
struct LinearizationReport {
  std::array<std::array<double, 2>, 2> A{};
  std::array<std::complex<double>, 2> eigenvalues{};
  double delta = 0.0;  // k1^2 - 4 k1 k2 / k3
  double rho = 0.0;    // guaranteed decay rate
  bool hurwitz = false;
  /// ||Q|| ||Q^-1|| for unit-norm eigenvector columns. Absent when A is
  /// defective (delta == 0).
  std::optional<double> c_bound;
};

LinearizationReport linearize(const ControllerParams& p);

enum class PhaseKind { kApproach, kTracking };

/// Steady heading angle of a phase:
///   approach: acos(-k2/vc), the heading held while closing in at speed k2;
///   tracking: acos(r_dot/vc), the heading on the reference pattern.
/// Throws std::domain_error if the acos argument leaves [-1, 1]
/// (approach additionally requires k2 < vc).
double phi_equilibrium(const ControllerParams& p, const RefSample& ref,
                       PhaseKind phase);

/// integral_0^e sat(tau/k3) dtau, closed form.
double sat_integral(double e, double k3);

/// V3 = k1 k2 int_rc^x1 sat((tau - rc)/k3) dtau + x2^2 / 2.
double lyapunov_V3(double x1, double x2, double rc, const ControllerParams& p);

/// V4 = (k2^3/k3) (int_r^d sat((tau-r)/k3) dtau + int_d^r sat((r-tau)/k3) dtau)
///      + e2^2 / 2.
double lyapunov_V4(double d, double r, double e2, const ControllerParams& p);

struct DecayFit {
  double rho_hat = 0.0;
  double t_begin = 0.0;
  double t_end = 0.0;
  std::size_t samples = 0;
};

/// Least-squares slope of ln|z| against t over [t_start, first t with
/// |z| < floor). Returns rho_hat = -slope. Throws std::runtime_error when the
/// window holds fewer than 50 samples.
DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> z_norm,
                        double t_start, double floor = 1e-9);

/// Same fit on a log, with z1 = e1 and z2 = vc cos(phi) - r_dot.
DecayFit fit_decay_rate(const TrajectoryLog& log, const ControllerParams& p,
                        double t_start, double floor = 1e-9);

/// |z(t)| series of a log (z2 from the true range rate).
std::vector<double> error_norms(const TrajectoryLog& log,
                                const ControllerParams& p);

struct PhaseOptions {
  double angle_tol = 0.02;  // [rad]
  double dwell = 1.0;       // [s]
};

/// Event times of a constant-radius run:
///   t1: phi first reaches [0, pi] (t0 when it starts there);
///   t2: phi rises through pi/2 after having been below pi/2 - angle_tol;
///   t3: phi settles within angle_tol of acos(-k2/vc) for `dwell` seconds;
///   t4: d falls through rc + k3 after t3.
/// Crossings are linearly interpolated. Missing phases stay empty.
struct PhaseReport {
  std::optional<double> t1, t2, t3, t4;
  std::optional<double> mean_ddot;        // mean true d' on [t3, t4]
  std::optional<double> max_phi_dev;      // max |phi - acos(-k2/vc)| on [t3, t4]
};

PhaseReport detect_phases(const TrajectoryLog& log, const ControllerParams& p,
                          double rc, const PhaseOptions& opts = {});

/// Distances d* in (0, rc), inside the linear band, where the closed loop has
/// an equilibrium at phi = -pi/2: roots of d^2 - rc d + 2 k3 vc^2 / (k1 k2).
/// Sorted ascending.
std::vector<double> interior_equilibria(const ControllerParams& p, double rc);

}  // namespace encircle
