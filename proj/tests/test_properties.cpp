// Randomized checks of the closed-loop invariants on scenarios that satisfy
// the convergence conditions. The range rate is taken from the true heading
// (RateSource::kExact) so the checks exercise the control law itself.
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "encircle/analysis.hpp"
#include "encircle/harness.hpp"

using namespace encircle;

namespace {

constexpr double kPi = std::numbers::pi;

// How far phi has left [0, pi]; phi is wrapped, so values below -pi/2 are
// read as having passed pi.
double phi_excursion(double phi) {
  if (phi >= 0.0) return 0.0;
  return phi > -kPi / 2 ? -phi : phi + kPi;
}

struct Violations {
  double phi = 0.0;       // largest excursion outside [0, pi]
  double v_rise = 0.0;    // largest per-record increase of V
  double v_max = 0.0;
};

Violations inspect(const TrajectoryLog& log, double t_from) {
  Violations v;
  for (std::size_t k = 0; k < log.size(); ++k) {
    const auto& r = log.records[k];
    v.phi = std::max(v.phi, phi_excursion(r.phi));
    v.v_max = std::max(v.v_max, r.V);
    if (k > 0 && log.records[k - 1].t >= t_from) {
      v.v_rise = std::max(v.v_rise, r.V - log.records[k - 1].V);
    }
  }
  return v;
}

RobotState polar_start(double d0, double phi0, double eta0) {
  return {d0 * std::cos(eta0), d0 * std::sin(eta0), wrap_angle(eta0 + phi0)};
}

std::vector<Scenario> constant_radius_suite(std::size_t n) {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<Scenario> out;
  while (out.size() < n) {
    Scenario sc;
    const double rc = 1.0 + 4.0 * U(rng);
    auto& p = sc.params;
    p.vc = 0.3 + 0.7 * U(rng);
    p.k3 = rc;
    p.k2 = (0.05 + 0.9 * U(rng)) * p.vc;
    p.k1 = 1.0 + 29.0 * U(rng);
    sc.command = RefCommand::constant(rc);
    sc.targets = TargetSet({{0.0, 0.0}});
    const double d0 = rc * (0.2 + 3.8 * U(rng));
    const double phi0 = kPi * U(rng);
    sc.initial_state = polar_start(d0, phi0, -kPi + 2.0 * kPi * U(rng));
    sc.rate_source = RateSource::kExact;
    sc.dt = 0.001;
    sc.t_end = 60.0;
    if (scenario_conditions(sc).all_passed()) out.push_back(sc);
  }
  return out;
}

std::vector<Scenario> time_varying_suite(std::size_t n) {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<Scenario> out;
  while (out.size() < n) {
    Scenario sc;
    auto& p = sc.params;
    p.vc = 0.3 + 0.7 * U(rng);
    const double offset = 2.0 + 8.0 * U(rng);
    const double amp = 0.3 * offset * U(rng);
    sc.command = RefCommand::sinusoid(offset, amp, 0.02 + 0.2 * U(rng), 2.0 * kPi * U(rng));
    p.k2 = (0.05 + 0.6 * U(rng)) * p.vc;
    p.k3 = 0.5 + 4.0 * U(rng);
    p.k1 = 1.0 + 29.0 * U(rng);
    if (!scenario_conditions(sc).all_passed()) continue;
    sc.targets = TargetSet({{0.0, 0.0}});
    const double d0 = offset * (0.3 + 2.5 * U(rng));
    sc.initial_state = polar_start(d0, kPi * U(rng), -kPi + 2.0 * kPi * U(rng));
    sc.rate_source = RateSource::kExact;
    sc.dt = 0.001;
    sc.t_end = 60.0;
    out.push_back(sc);
  }
  return out;
}

}  // namespace

TEST(Properties, ConstantRadiusInvariants) {
  const auto suite = constant_radius_suite(100);
  const auto results = run_batch(suite);
  int phi_fail = 0, v_fail = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    ASSERT_TRUE(results[i].log) << results[i].error;
    const auto& log = *results[i].log;
    // phi(t0) is in [0, pi], so t1 = t0 and V3 must not rise at all.
    const auto ph = detect_phases(log, suite[i].params, suite[i].command.constant_value());
    ASSERT_TRUE(ph.t1);
    EXPECT_EQ(*ph.t1, 0.0);
    const auto v = inspect(log, *ph.t1);
    if (v.phi > 0.02) {
      ++phi_fail;
      ADD_FAILURE() << "scenario " << i << ": phi leaves [0, pi] by " << v.phi;
    }
    if (v.v_rise > 1e-6 * v.v_max) {
      ++v_fail;
      ADD_FAILURE() << "scenario " << i << ": V3 rises by " << v.v_rise;
    }
  }
  EXPECT_EQ(phi_fail, 0);
  EXPECT_EQ(v_fail, 0);
}

TEST(Properties, TimeVaryingInvariants) {
  const auto suite = time_varying_suite(40);
  const auto results = run_batch(suite);
  for (std::size_t i = 0; i < suite.size(); ++i) {
    ASSERT_TRUE(results[i].log) << results[i].error;
    const auto v = inspect(*results[i].log, 0.0);
    EXPECT_LE(v.phi, 0.02) << "scenario " << i;
    EXPECT_LE(v.v_rise, 1e-6 * v.v_max) << "scenario " << i;
  }
}
