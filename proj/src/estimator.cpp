#include "encircle/estimator.hpp"

#include <cmath>
#include <stdexcept>

namespace encircle {

WashoutFilter::WashoutFilter(double h, double d0) : h_(h), w_(d0), d_prev_(d0) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("washout filter: h must be > 0");
  }
  if (!std::isfinite(d0)) {
    throw std::invalid_argument("washout filter: initial sample must be finite");
  }
}

WashoutFilter WashoutFilter::from_state(double h, double w, double d_prev) {
  WashoutFilter f(h, d_prev);
  f.w_ = w;
  f.xi_ = h * (d_prev - w);
  return f;
}

double WashoutFilter::update(double d, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("washout filter: dt must be > 0");
  const double hdt = h_ * dt;
  const double a = std::exp(-hdt);
  // (1 - a)/hdt loses precision for tiny hdt; expm1 keeps it accurate.
  const double ramp_weight = 1.0 + std::expm1(-hdt) / hdt;
  w_ = d_prev_ + a * (w_ - d_prev_) + ramp_weight * (d - d_prev_);
  d_prev_ = d;
  xi_ = h_ * (d - w_);
  return xi_;
}

}  // namespace encircle
