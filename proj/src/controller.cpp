#include "encircle/controller.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace encircle {
namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

ControlOutput finish(double d_used, bool clamped_d, double alpha,
                     bool clamped_alpha, double e1, double sat_arg, double e2,
                     double s, double bracket,
                     const ControllerParams& p) {
  const double va = p.vc * alpha;
  double u = va / d_used + (1.0 / va) * bracket;
  if (!std::isfinite(u)) {
    throw std::runtime_error("controller produced a non-finite turn rate");
  }
  ControlOutput out;
  if (p.u_max && std::abs(u) > *p.u_max) {
    u = std::copysign(*p.u_max, u);
    out.diag.clamped_u = true;
  }
  out.u = u;
  out.diag.alpha = alpha;
  out.diag.e1 = e1;
  out.diag.e2 = e2;
  out.diag.s = s;
  out.diag.sat_arg = sat_arg;
  out.diag.clamped_d = clamped_d;
  out.diag.clamped_alpha = clamped_alpha;
  return out;
}

}  // namespace

void ControllerParams::validate() const {
  if (!positive_finite(vc)) throw std::invalid_argument("vc must be > 0");
  if (!positive_finite(k1)) throw std::invalid_argument("k1 must be > 0");
  if (!positive_finite(k2)) throw std::invalid_argument("k2 must be > 0");
  if (!positive_finite(k3)) throw std::invalid_argument("k3 must be > 0");
  if (!positive_finite(eps1)) throw std::invalid_argument("eps1 must be > 0");
  if (!positive_finite(eps2) || eps2 >= 1.0) {
    throw std::invalid_argument("eps2 must lie in (0, 1)");
  }
  if (u_max && !positive_finite(*u_max)) {
    throw std::invalid_argument("u_max must be > 0 when present");
  }
}

double sat(double eta) {
  if (std::abs(eta) < 1.0) return eta;
  return eta > 0.0 ? 1.0 : -1.0;
}

double compute_alpha(double xi, double vc, double eps2) {
  const double alpha = std::sqrt(std::max(vc * vc - xi * xi, 0.0)) / vc;
  return std::max(alpha, eps2);
}

ControlOutput compute_u(double d_meas, double xi, const RefSample& ref,
                        const ControllerParams& p) {
  if (!std::isfinite(d_meas) || !std::isfinite(xi) || !std::isfinite(ref.r) ||
      !std::isfinite(ref.r_dot) || !std::isfinite(ref.r_ddot)) {
    throw std::invalid_argument("controller: non-finite input");
  }
  const bool clamped_d = d_meas <= p.eps1;
  const double d = clamped_d ? p.eps1 : d_meas;
  const double raw_alpha = std::sqrt(std::max(p.vc * p.vc - xi * xi, 0.0)) / p.vc;
  const bool clamped_alpha = raw_alpha <= p.eps2;
  const double alpha = std::max(raw_alpha, p.eps2);

  const double e1 = d - ref.r;
  const double sat_arg = e1 / p.k3;
  const double sv = sat(sat_arg);
  const double s = -p.k2 * sv + ref.r_dot;
  const double e2 = xi - s;
  const double bracket = p.k1 * (xi - ref.r_dot + p.k2 * sv) - ref.r_ddot;
  return finish(d, clamped_d, alpha, clamped_alpha, e1, sat_arg, e2, s, bracket,
                p);
}

ControlOutput compute_u_constant(double d_meas, double xi, double rc,
                                 const ControllerParams& p) {
  if (!std::isfinite(d_meas) || !std::isfinite(xi) || !std::isfinite(rc)) {
    throw std::invalid_argument("controller: non-finite input");
  }
  const bool clamped_d = d_meas <= p.eps1;
  const double d = clamped_d ? p.eps1 : d_meas;
  const double raw_alpha = std::sqrt(std::max(p.vc * p.vc - xi * xi, 0.0)) / p.vc;
  const bool clamped_alpha = raw_alpha <= p.eps2;
  const double alpha = std::max(raw_alpha, p.eps2);

  const double e1 = d - rc;
  const double sat_arg = e1 / p.k3;
  const double sv = sat(sat_arg);
  const double s = -p.k2 * sv;
  const double e2 = xi - s;
  // Same operation order as compute_u with r_dot = r_ddot = 0, so the two
  // entry points agree to the last bit.
  const double bracket = p.k1 * (xi + p.k2 * sv);
  return finish(d, clamped_d, alpha, clamped_alpha, e1, sat_arg, e2, s, bracket,
                p);
}

bool ConditionReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ConditionCheck& c) { return c.passed; });
}

ConditionReport check_constant_conditions(const ControllerParams& p, double rc) {
  ConditionReport r;
  r.checks.push_back({"0 < k2 < vc", p.k2 > 0.0 && p.k2 < p.vc,
                      "k2=" + fmt_num(p.k2) + ", vc=" + fmt_num(p.vc)});
  const bool k3_eq = std::abs(p.k3 - rc) <= 1e-12 * std::max(std::abs(rc), 1.0);
  r.checks.push_back(
      {"k3 == rc", k3_eq, "k3=" + fmt_num(p.k3) + ", rc=" + fmt_num(rc)});
  return r;
}

ConditionReport check_timevarying_conditions(const ControllerParams& p,
                                             double rv, double ra) {
  ConditionReport r;
  const double lhs1 = p.k1;
  const double rhs1 = p.k2 / p.k3;
  r.checks.push_back({"k1 > k2/k3", lhs1 > rhs1,
                      fmt_num(lhs1) + " > " + fmt_num(rhs1)});
  const double lhs2 = p.k1 * (p.vc - p.k2 - rv);
  r.checks.push_back({"k1 (vc - k2 - rv) > ra", lhs2 > ra,
                      fmt_num(lhs2) + " > " + fmt_num(ra)});
  const double lhs3 = p.k1 * (p.vc * p.vc - rv * rv);
  const double rhs3 = rv * ra;
  r.checks.push_back({"k1 (vc^2 - rv^2) > rv ra", lhs3 > rhs3,
                      fmt_num(lhs3) + " > " + fmt_num(rhs3)});
  return r;
}

BacksteppingController::BacksteppingController(ControllerParams params,
                                               const RefCommand& command)
    : params_(params) {
  params_.validate();
  if (command.is_constant()) constant_rc_ = command.constant_value();
}

ControlOutput BacksteppingController::operator()(double d_meas, double xi,
                                                 const RefSample& ref,
                                                 double /*t*/) const {
  if (constant_rc_) return compute_u_constant(d_meas, xi, *constant_rc_, params_);
  return compute_u(d_meas, xi, ref, params_);
}

}  // namespace encircle
