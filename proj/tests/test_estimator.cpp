#include <gtest/gtest.h>

#include <cmath>

#include "encircle/estimator.hpp"

using namespace encircle;

TEST(Washout, InitIsAtRest) {
  for (auto [h, d0] : {std::pair{100.0, 5.0}, {1.0, 0.0}, {100.0, 2.0}}) {
    const WashoutFilter f(h, d0);
    EXPECT_EQ(f.internal_state(), d0);
    EXPECT_EQ(f.xi(), 0.0);
    EXPECT_EQ(f.gain(), h);
  }
  EXPECT_THROW(WashoutFilter(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(WashoutFilter(-1.0, 1.0), std::invalid_argument);
}

TEST(Washout, DcRejection) {
  const double dt = 0.01;
  for (double h : {1.0, 10.0, 100.0}) {
    WashoutFilter rest(h, 5.0);
    // Internal state 1 cm off the (constant) input.
    auto off = WashoutFilter::from_state(h, 4.99, 5.0);
    for (int k = 1; k * dt <= 20.0 / h + 1e-12 || k < 2; ++k) {
      EXPECT_EQ(rest.update(5.0, dt), 0.0);
      off.update(5.0, dt);
    }
    EXPECT_LT(std::abs(off.xi()), 1e-6) << "h=" << h;
  }
}

TEST(Washout, RampSlope) {
  const double h = 100.0, dt = 0.01;
  WashoutFilter f(h, 0.0);
  for (int k = 1; k <= 100; ++k) {
    const double xi = f.update(0.3 * k * dt, dt);
    if (k * dt >= 0.1 - 1e-12) {
      EXPECT_NEAR(xi, 0.3, 0.003) << k;
    }
  }
}

TEST(Washout, SineTracksDerivative) {
  const double h = 100.0, dt = 0.01;
  WashoutFilter f(h, 2.0);
  for (int k = 1; k <= 2000; ++k) {
    const double t = k * dt;
    const double xi = f.update(2.0 + std::sin(t), dt);
    if (t > 1.0) {
      EXPECT_NEAR(xi, std::cos(t), 0.02) << t;
    }
  }
}

TEST(Washout, StableForLargeGainStep) {
  WashoutFilter f(1e4, 0.0);
  for (int k = 0; k < 100; ++k) {
    const double xi = f.update(std::sin(0.1 * k), 0.01);
    ASSERT_TRUE(std::isfinite(xi));
    EXPECT_LT(std::abs(xi), 100.0);
  }
}

TEST(Washout, LinearityPerStep) {
  const double h = 37.0, a = 1.7, b = -0.4;
  auto f1 = WashoutFilter::from_state(h, 0.3, 0.2);
  auto f2 = WashoutFilter::from_state(h, -1.1, 0.9);
  auto fc = WashoutFilter::from_state(h, a * 0.3 + b * -1.1, a * 0.2 + b * 0.9);
  for (int k = 0; k < 200; ++k) {
    const double dt = 0.001 * (1 + k % 7);
    const double d1 = std::sin(0.05 * k), d2 = std::cos(0.11 * k) + 0.3;
    const double x1 = f1.update(d1, dt);
    const double x2 = f2.update(d2, dt);
    const double xc = fc.update(a * d1 + b * d2, dt);
    EXPECT_NEAR(xc, a * x1 + b * x2, 1e-12 * (1 + std::abs(xc)));
    EXPECT_NEAR(fc.internal_state(),
                a * f1.internal_state() + b * f2.internal_state(), 1e-12);
  }
}

TEST(Washout, ConvergesToDerivativeAsGainGrows) {
  // sup |xi - d'| on a smooth signal shrinks as h grows.
  double prev = 1e9;
  for (double h : {5.0, 50.0, 500.0}) {
    const double dt = 0.001;
    WashoutFilter f(h, 0.0);
    double worst = 0.0;
    for (int k = 1; k <= 5000; ++k) {
      const double t = k * dt;
      const double xi = f.update(std::sin(2.0 * t), dt);
      if (t > 2.0) worst = std::max(worst, std::abs(xi - 2.0 * std::cos(2.0 * t)));
    }
    EXPECT_LT(worst, prev);
    prev = worst;
  }
  EXPECT_LT(prev, 0.02);
}
