#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "encircle/analysis.hpp"
#include "encircle/harness.hpp"

using namespace encircle;

namespace {

constexpr double kPi = std::numbers::pi;

Scenario reference_run() {
  Scenario sc;
  sc.initial_state = {7, 2, -3 * kPi / 5};
  return sc;
}

class ConstantTurn final : public RangeController {
 public:
  explicit ConstantTurn(double u) : u_(u) {}
  ControlOutput operator()(double, double, const RefSample&, double) const override {
    return {u_, {}};
  }

 private:
  double u_;
};

}  // namespace

TEST(Harness, ReferenceConverges) {
  const auto log = run(reference_run());
  EXPECT_LT(std::abs(log.back().d_true - 2.0), 1e-2);
  EXPECT_LT(std::abs(log.back().phi - kPi / 2), 1e-2);
}

TEST(Harness, RecordLayout) {
  auto sc = reference_run();
  sc.t_end = 10.0;
  for (int every : {1, 3, 7}) {
    sc.log_every = every;
    const auto log = run(sc);
    ASSERT_EQ(log.size(), sc.record_count());
    EXPECT_EQ(log.size(), static_cast<std::size_t>(std::floor(10.0 / (0.01 * every) + 1e-9)) + 1);
    for (std::size_t i = 1; i < log.size(); ++i) {
      EXPECT_GT(log.records[i].t, log.records[i - 1].t);
      EXPECT_NEAR(log.records[i].t - log.records[i - 1].t, 0.01 * every, 1e-12);
    }
  }
}

TEST(Harness, FirstRecordIsInitialState) {
  const auto log = run(reference_run());
  const auto& r0 = log.records.front();
  EXPECT_EQ(r0.t, 0.0);
  EXPECT_EQ(r0.x, 7.0);
  EXPECT_EQ(r0.y, 2.0);
  EXPECT_EQ(r0.d_true, 5.0);
  EXPECT_EQ(r0.xi, 0.0);
  EXPECT_EQ(r0.e1, 3.0);
  EXPECT_NEAR(r0.u, 0.5 / 5.0 + 18.0, 1e-12);
}

TEST(Harness, OnOrbitHold) {
  Scenario sc;
  sc.initial_state = {4, 2, kPi / 2};
  const auto log = run(sc);
  for (const auto& r : log.records) EXPECT_LT(std::abs(r.d_true - 2.0), 1e-6) << r.t;
}

TEST(Harness, Deterministic) {
  auto sc = reference_run();
  sc.params.k1 = 1.0;
  sc.params.k2 = 0.25;
  sc.filter_gain = 1.0;
  sc.noise = {0.05, 9};
  sc.t_end = 30.0;
  const auto a = run(sc);
  const auto b = run(sc);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a.records[i], b.records[i]) << i;
  sc.noise.seed = 10;
  EXPECT_NE(run(sc).back().x, a.back().x);
}

TEST(Harness, DtRefinement) {
  auto sc = reference_run();
  const auto coarse = run(sc).back();
  sc.dt = 0.005;
  const auto fine = run(sc).back();
  EXPECT_LT(std::abs(coarse.d_true - fine.d_true), 1e-4);
  EXPECT_LT(std::abs(coarse.phi - fine.phi), 1e-4);
}

TEST(Harness, ClampsDormantAfterTransient) {
  auto sc = reference_run();
  const auto log = run(sc);
  const auto ph = detect_phases(log, sc.params, 2.0);
  ASSERT_TRUE(ph.t1);
  for (const auto& r : log.records) {
    if (r.t <= *ph.t1 + 5.0) continue;
    EXPECT_FALSE(r.clamp_d || r.clamp_alpha || r.clamp_u) << r.t;
  }
}

TEST(Harness, ConstantSpeed) {
  const auto sc = reference_run();
  const auto log = run(sc);
  const double vc = sc.params.vc;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const auto& r = log.records[i];
    EXPECT_NEAR(std::hypot(vc * std::cos(r.theta), vc * std::sin(r.theta)), vc, 1e-9);
    if (i > 0) {
      const auto& q = log.records[i - 1];
      EXPECT_LE(std::hypot(r.x - q.x, r.y - q.y), vc * sc.dt * (1 + 1e-9));
    }
  }
}

TEST(Harness, EightStartsConverge) {
  const double poses[8][3] = {{7, 2, -0.6},  {2, 7, 0.5},   {-3, 2, 1.0}, {2, -3, -0.5},
                              {2.5, 2, 0.0}, {2, 2.5, 0.5}, {1.5, 2, 1.0}, {2, 1.5, -0.5}};
  std::vector<Scenario> batch;
  for (const auto& p : poses) {
    Scenario sc;
    sc.initial_state = {p[0], p[1], p[2] * kPi};
    batch.push_back(sc);
  }
  const auto out = run_batch(batch);
  ASSERT_EQ(out.size(), 8u);
  for (std::size_t i = 0; i < out.size(); ++i) {
    ASSERT_TRUE(out[i].log) << out[i].error;
    const auto& log = *out[i].log;
    EXPECT_EQ(log.records.front().x, poses[i][0]);  // order kept
    EXPECT_LT(std::abs(log.back().e1), 1e-2) << i;
    const auto ph = detect_phases(log, batch[i].params, 2.0);
    ASSERT_TRUE(ph.t1) << i;
    EXPECT_LT(*ph.t1, 60.0) << i;
  }
}

TEST(Harness, BatchCollectsErrors) {
  EXPECT_TRUE(run_batch({}).empty());
  Scenario good = reference_run();
  good.t_end = 1.0;
  Scenario bad = good;
  bad.dt = -1.0;
  const auto out = run_batch({good, bad, good}, 2);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_TRUE(out[0].log && out[2].log);
  EXPECT_FALSE(out[1].log);
  EXPECT_FALSE(out[1].error.empty());
  EXPECT_EQ(out[0].log->records, out[2].log->records);
}

TEST(Harness, BatchMatchesSerialRuns) {
  std::vector<Scenario> batch;
  for (int i = 0; i < 6; ++i) {
    Scenario sc = reference_run();
    sc.params.k1 = 1.0;
    sc.params.k2 = 0.25;
    sc.filter_gain = 1.0;
    sc.noise = {0.05, static_cast<std::uint64_t>(i)};
    sc.t_end = 20.0;
    batch.push_back(sc);
  }
  const auto par = run_batch(batch, 4);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    EXPECT_EQ(par[i].log->records, run(batch[i]).records);
  }
}

TEST(Harness, ScenarioValidation) {
  Scenario sc;
  sc.dt = 0.0;
  EXPECT_THROW(run(sc), std::invalid_argument);
  sc = Scenario{};
  sc.t_end = 0.005;
  EXPECT_THROW(run(sc), std::invalid_argument);
  sc = Scenario{};
  sc.log_every = 0;
  EXPECT_THROW(run(sc), std::invalid_argument);
  sc = Scenario{};
  sc.noise.sigma = -1;
  EXPECT_THROW(run(sc), std::invalid_argument);
}

TEST(Harness, NumericalAbortCarriesRecordIndex) {
  Scenario sc;
  sc.initial_state = {1.7e308, 1.7e308, 0.0};
  try {
    run(sc);
    FAIL() << "expected abort";
  } catch (const NumericalAbort& e) {
    EXPECT_EQ(e.record_index(), 0u);
  }
}

TEST(Harness, PluggableLaw) {
  Scenario sc;
  sc.initial_state = {0, 0, 0};
  sc.targets = TargetSet({{0, 10}});
  sc.t_end = 20.0;
  // u = vc / 1 traces a unit circle centred on (0, 1).
  const auto log = run(sc, ConstantTurn(0.5));
  for (const auto& r : log.records) {
    EXPECT_NEAR(std::hypot(r.x, r.y - 1.0), 1.0, 1e-8);
    EXPECT_EQ(r.u, 0.5);
  }
}

TEST(Harness, StepSplittingCanBeDisabled) {
  auto sc = reference_run();
  sc.t_end = 20.0;
  sc.max_turn_per_step = std::numeric_limits<double>::infinity();
  const auto log = run(sc);
  EXPECT_EQ(log.size(), sc.record_count());
  EXPECT_LT(std::abs(log.back().e1), 0.05);
}

TEST(Harness, InteriorEquilibriumEscape) {
  const ControllerParams p;
  const auto rep = stress_interior_equilibrium(p, 2.0);
  EXPECT_TRUE(rep.gain_condition);
  ASSERT_EQ(rep.probes.size(), 2u);
  EXPECT_NEAR(rep.probes[0].d_star, 0.05719, 1e-5);
  EXPECT_NEAR(rep.probes[1].d_star, 1.94281, 1e-5);
  for (const auto& pr : rep.probes) {
    EXPECT_LT(std::abs(pr.phi_rate_residual), 1e-12);
    EXPECT_TRUE(pr.escaped);
    ASSERT_TRUE(pr.escape_time);
    EXPECT_GT(pr.max_excursion, 0.1);
  }
}

TEST(Harness, ConditionsAttached) {
  auto sc = reference_run();
  EXPECT_TRUE(scenario_conditions(sc).all_passed());
  sc.command = RefCommand::sinusoid(20, 1.8, 0.2);
  sc.params.k2 = 0.1;
  const auto rep = scenario_conditions(sc);
  EXPECT_EQ(rep.checks.size(), 3u);
  EXPECT_TRUE(rep.all_passed());
}
