#pragma once

#include <variant>
#include <vector>

namespace encircle {

/// Reference distance and its first two time derivatives at one instant.
struct RefSample {
  double r = 0.0;       // [m]
  double r_dot = 0.0;   // [m/s]
  double r_ddot = 0.0;  // [m/s^2]
};

/// Derivative bounds: |r_dot| <= rv, |r_ddot| <= ra.
struct RefBounds {
  double rv = 0.0;
  double ra = 0.0;
};

struct ConstantTerm {
  double rc = 0.0;
};

/// offset + amplitude * sin(omega * t + phase)
struct SinusoidTerm {
  double offset = 0.0;
  double amplitude = 0.0;
  double omega = 0.0;
  double phase = 0.0;
};

using RefTerm = std::variant<ConstantTerm, SinusoidTerm>;

/// Smooth reference distance command r(t).
///
/// A command is a finite sum of constant and sinusoidal terms. Individual
/// terms of a sum may be non-positive; the command as a whole must stay
/// strictly positive, which is checked at construction against the lower
/// bound sum(offsets) - sum(|amplitudes|). That bound is exact for a single
/// term and for sums whose peaks can align, and conservative otherwise.
///
/// Immutable after construction.
class RefCommand {
 public:
  static RefCommand constant(double rc);
  static RefCommand sinusoid(double offset, double amplitude, double omega,
                             double phase = 0.0);
  static RefCommand sum(std::vector<RefTerm> terms);
  /// Flattens the terms of several commands into one sum.
  static RefCommand sum(const std::vector<RefCommand>& parts);

  /// Closed-form (r, r_dot, r_ddot) at time t.
  RefSample eval(double t) const;

  /// Sup-norm bounds of r_dot and r_ddot. Sums use the triangle inequality,
  /// so the result may be loose when term peaks do not align.
  RefBounds bounds() const;

  /// Guaranteed lower bound of r(t) over all t.
  double lower_bound() const;

  /// True when every term is constant (r_dot = r_ddot = 0 exactly).
  bool is_constant() const;

  /// Value of a constant command. Only meaningful when is_constant().
  double constant_value() const;

  const std::vector<RefTerm>& terms() const { return terms_; }

 private:
  explicit RefCommand(std::vector<RefTerm> terms);

  std::vector<RefTerm> terms_;
};

/// Free-function form of RefCommand::eval.
inline RefSample eval(const RefCommand& cmd, double t) { return cmd.eval(t); }
inline RefBounds bounds(const RefCommand& cmd) { return cmd.bounds(); }

}  // namespace encircle
