#pragma once

namespace encircle {

/// Washout filter xi(s) = h s / (s + h) d(s), realized as
///   w' = h (d - w),   xi = h (d - w).
///
/// The state is advanced with the exact solution of w' = h (d - w) for an
/// input that varies linearly between consecutive samples (ramp-invariant
/// discretization). This is unconditionally stable for any h*dt and returns
/// xi == slope exactly for a ramp in steady state, so xi tracks d' without
/// the gain error a sample-and-hold input would introduce at h*dt ~ 1.
///
/// The output is the raw filter value; any clamping happens in the controller.
class WashoutFilter {
 public:
  /// Starts at rest on the first sample: w = d0, so xi(0) = 0.
  WashoutFilter(double h, double d0);

  /// Advances the filter by dt to the new sample d. Returns the new xi.
  double update(double d, double dt);

  double gain() const { return h_; }
  double xi() const { return xi_; }
  double internal_state() const { return w_; }
  double last_input() const { return d_prev_; }

  /// Reconstructs a filter from raw state (used by tests and restarts).
  static WashoutFilter from_state(double h, double w, double d_prev);

 private:
  double h_;
  double w_;
  double d_prev_;
  double xi_ = 0.0;
};

}  // namespace encircle
