#include "encircle/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace encircle {

double ErrorState::norm() const { return std::hypot(z1, z2); }

LinearizationReport linearize(const ControllerParams& p) {
  LinearizationReport rep;
  const double stiffness = p.k1 * p.k2 / p.k3;
  rep.A = {{{0.0, 1.0}, {-stiffness, -p.k1}}};
  rep.delta = p.k1 * p.k1 - 4.0 * stiffness;

  // Roots of lambda^2 + k1 lambda + k1 k2 / k3.
  if (rep.delta >= 0.0) {
    const double sq = std::sqrt(rep.delta);
    // Cancellation-free pair: the large root directly, the small one through
    // the product of roots.
    const double big = -(p.k1 + sq) / 2.0;
    const double small = stiffness / big;
    rep.eigenvalues = {std::complex<double>(small, 0.0),
                       std::complex<double>(big, 0.0)};
  } else {
    const double im = std::sqrt(-rep.delta) / 2.0;
    rep.eigenvalues = {std::complex<double>(-p.k1 / 2.0, im),
                       std::complex<double>(-p.k1 / 2.0, -im)};
  }
  rep.rho = rep.delta > 0.0 ? (p.k1 - std::sqrt(rep.delta)) / 2.0 : p.k1 / 2.0;
  rep.hurwitz = rep.eigenvalues[0].real() < 0.0 && rep.eigenvalues[1].real() < 0.0;

  if (rep.delta != 0.0) {
    // Eigenvectors of the companion matrix are (1, lambda). With unit columns
    // Q^H Q = [[1, c], [conj(c), 1]], whose eigenvalues are 1 +- |c|.
    auto unit = [](std::complex<double> lam) {
      const double n = std::sqrt(1.0 + std::norm(lam));
      return std::array<std::complex<double>, 2>{1.0 / n, lam / n};
    };
    const auto q1 = unit(rep.eigenvalues[0]);
    const auto q2 = unit(rep.eigenvalues[1]);
    const double c =
        std::abs(std::conj(q1[0]) * q2[0] + std::conj(q1[1]) * q2[1]);
    if (c < 1.0) rep.c_bound = std::sqrt((1.0 + c) / (1.0 - c));
  }
  return rep;
}

double phi_equilibrium(const ControllerParams& p, const RefSample& ref,
                       PhaseKind phase) {
  if (phase == PhaseKind::kApproach) {
    if (!(p.k2 < p.vc)) {
      throw std::domain_error("approach angle undefined for k2 >= vc");
    }
    return std::acos(-p.k2 / p.vc);
  }
  const double c = ref.r_dot / p.vc;
  if (std::abs(c) > 1.0) {
    throw std::domain_error("tracking angle undefined for |r_dot| > vc");
  }
  return std::acos(c);
}

double sat_integral(double e, double k3) {
  const double a = std::abs(e);
  if (a <= k3) return a * a / (2.0 * k3);
  return k3 / 2.0 + (a - k3);
}

double lyapunov_V3(double x1, double x2, double rc, const ControllerParams& p) {
  return p.k1 * p.k2 * sat_integral(x1 - rc, p.k3) + 0.5 * x2 * x2;
}

double lyapunov_V4(double d, double r, double e2, const ControllerParams& p) {
  // Both integrals reduce to sat_integral(|d - r|).
  const double weight = p.k2 * p.k2 * p.k2 / p.k3;
  return weight * 2.0 * sat_integral(d - r, p.k3) + 0.5 * e2 * e2;
}

DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> z_norm,
                        double t_start, double floor) {
  if (t.size() != z_norm.size()) {
    throw std::invalid_argument("fit_decay_rate: series length mismatch");
  }
  std::size_t begin = 0;
  while (begin < t.size() && t[begin] < t_start) ++begin;
  std::size_t end = begin;
  while (end < t.size() && z_norm[end] >= floor) ++end;

  const std::size_t n = end - begin;
  if (n < 50) {
    throw std::runtime_error("fit_decay_rate: window holds fewer than 50 samples");
  }
  double st = 0.0, sy = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    st += t[i];
    sy += std::log(z_norm[i]);
  }
  const double mt = st / n, my = sy / n;
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const double dt = t[i] - mt;
    stt += dt * dt;
    sty += dt * (std::log(z_norm[i]) - my);
  }
  DecayFit fit;
  fit.rho_hat = -sty / stt;
  fit.t_begin = t[begin];
  fit.t_end = t[end - 1];
  fit.samples = n;
  return fit;
}

std::vector<double> error_norms(const TrajectoryLog& log,
                                const ControllerParams& p) {
  std::vector<double> out;
  out.reserve(log.size());
  for (const auto& rec : log.records) {
    const ErrorState z{rec.e1, p.vc * std::cos(rec.phi) - rec.r_dot};
    out.push_back(z.norm());
  }
  return out;
}

DecayFit fit_decay_rate(const TrajectoryLog& log, const ControllerParams& p,
                        double t_start, double floor) {
  std::vector<double> t;
  t.reserve(log.size());
  for (const auto& rec : log.records) t.push_back(rec.t);
  const auto z = error_norms(log, p);
  return fit_decay_rate(t, z, t_start, floor);
}

namespace {

double lerp_time(const LogRecord& a, const LogRecord& b, double va, double vb,
                 double level) {
  if (vb == va) return b.t;
  const double f = (level - va) / (vb - va);
  return a.t + std::clamp(f, 0.0, 1.0) * (b.t - a.t);
}

bool in_upper_half(double phi) { return phi >= 0.0 && phi <= std::numbers::pi; }

}  // namespace

PhaseReport detect_phases(const TrajectoryLog& log, const ControllerParams& p,
                          double rc, const PhaseOptions& opts) {
  PhaseReport rep;
  const auto& rs = log.records;
  if (rs.empty()) return rep;
  constexpr double kHalfPi = std::numbers::pi / 2.0;

  // t1
  std::size_t i1 = rs.size();
  if (in_upper_half(rs[0].phi)) {
    i1 = 0;
    rep.t1 = rs[0].t;
  } else {
    for (std::size_t k = 1; k < rs.size(); ++k) {
      if (!in_upper_half(rs[k].phi)) continue;
      i1 = k;
      const double a = rs[k - 1].phi, b = rs[k].phi;
      rep.t1 = (a < 0.0 && b - a < std::numbers::pi) ? lerp_time(rs[k - 1], rs[k], a, b, 0.0)
                                                     : rs[k].t;
      break;
    }
  }
  if (!rep.t1) return rep;

  // t2
  bool seen_below = false;
  std::size_t i2 = rs.size();
  for (std::size_t k = i1; k < rs.size(); ++k) {
    if (seen_below && k > i1 && rs[k - 1].phi < kHalfPi && rs[k].phi >= kHalfPi &&
        rs[k].phi - rs[k - 1].phi < std::numbers::pi) {
      rep.t2 = lerp_time(rs[k - 1], rs[k], rs[k - 1].phi, rs[k].phi, kHalfPi);
      i2 = k;
      break;
    }
    if (rs[k].phi < kHalfPi - opts.angle_tol) seen_below = true;
  }

  // t3: first sample that starts a dwell-long stay near the approach angle.
  std::size_t i3 = rs.size();
  if (p.k2 < p.vc) {
    const double target = std::acos(-p.k2 / p.vc);
    const std::size_t from = i2 < rs.size() ? i2 : i1;
    std::size_t run_start = rs.size();
    for (std::size_t k = from; k < rs.size(); ++k) {
      if (std::abs(rs[k].phi - target) < opts.angle_tol) {
        if (run_start == rs.size()) run_start = k;
        if (rs[k].t - rs[run_start].t >= opts.dwell) {
          i3 = run_start;
          rep.t3 = rs[run_start].t;
          break;
        }
      } else {
        run_start = rs.size();
      }
    }
  }

  // t4
  const double knee = rc + p.k3;
  const std::size_t from4 = i3 < rs.size() ? i3 : i1;
  std::size_t i4 = rs.size();
  for (std::size_t k = std::max<std::size_t>(from4, 1); k < rs.size(); ++k) {
    if (rs[k - 1].d_true > knee && rs[k].d_true <= knee) {
      rep.t4 = lerp_time(rs[k - 1], rs[k], rs[k - 1].d_true, rs[k].d_true, knee);
      i4 = k;
      break;
    }
  }

  if (rep.t3 && rep.t4) {
    const double target = std::acos(-p.k2 / p.vc);
    double sum = 0.0, dev = 0.0;
    std::size_t n = 0;
    for (std::size_t k = i3; k < i4; ++k) {
      sum += p.vc * std::cos(rs[k].phi);
      dev = std::max(dev, std::abs(rs[k].phi - target));
      ++n;
    }
    if (n > 0) {
      rep.mean_ddot = sum / n;
      rep.max_phi_dev = dev;
    }
  }
  return rep;
}

std::vector<double> interior_equilibria(const ControllerParams& p, double rc) {
  // With phi = -pi/2 (so d' = 0, alpha = 1) and d inside the linear band,
  // phi' = 2 vc / d + k1 k2 (d - rc) / (vc k3), which vanishes on
  // d^2 - rc d + 2 k3 vc^2 / (k1 k2) = 0. For k3 = rc this is the textbook
  // quadratic -d^2 + rc d - 2 rc vc^2 / (k1 k2).
  const double c = 2.0 * p.k3 * p.vc * p.vc / (p.k1 * p.k2);
  const double disc = rc * rc - 4.0 * c;
  std::vector<double> roots;
  if (disc < 0.0) return roots;
  const double sq = std::sqrt(disc);
  const double big = (rc + sq) / 2.0;
  const double small = c / big;
  for (double d : {small, big}) {
    if (d > 0.0 && d < rc && rc - d < p.k3) roots.push_back(d);
  }
  if (roots.size() == 2 && roots[0] == roots[1]) roots.pop_back();
  return roots;
}

}  // namespace encircle
