#include "encircle/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "encircle/analysis.hpp"
#include "encircle/estimator.hpp"

namespace encircle {

NumericalAbort::NumericalAbort(std::size_t record_index, const std::string& what)
    : std::runtime_error(what + " (record " + std::to_string(record_index) + ")"),
      record_index_(record_index) {}

void Scenario::validate() const {
  params.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("scenario: dt must be > 0");
  }
  if (!(t_end > dt) || !std::isfinite(t_end)) {
    throw std::invalid_argument("scenario: t_end must exceed dt");
  }
  if (log_every < 1) throw std::invalid_argument("scenario: log_every must be >= 1");
  if (!(filter_gain > 0.0) || !std::isfinite(filter_gain)) {
    throw std::invalid_argument("scenario: filter gain h must be > 0");
  }
  if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma)) {
    throw std::invalid_argument("scenario: noise sigma must be >= 0");
  }
  if (!(max_turn_per_step > 0.0)) {
    throw std::invalid_argument("scenario: max_turn_per_step must be > 0");
  }
  const auto& s = initial_state;
  if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.theta)) {
    throw std::invalid_argument("scenario: initial state must be finite");
  }
}

std::size_t Scenario::step_count() const {
  return static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));
}

std::size_t Scenario::record_count() const {
  return step_count() / static_cast<std::size_t>(log_every) + 1;
}

ConditionReport scenario_conditions(const Scenario& sc) {
  if (sc.command.is_constant()) {
    return check_constant_conditions(sc.params, sc.command.constant_value());
  }
  const auto b = sc.command.bounds();
  return check_timevarying_conditions(sc.params, b.rv, b.ra);
}

namespace {

bool finite_state(const RobotState& s) {
  return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.theta);
}

double true_phi(const RobotState& s, const TargetSet& targets) {
  const Point2& tgt = targets[targets.nearest(s.position())];
  if (s.x == tgt.x && s.y == tgt.y) return 0.0;
  return true_polar(s, tgt).phi;
}

double initial_measurement(const Scenario& sc) {
  const double d0 = measure(sc.initial_state, sc.targets, sc.noise, 0);
  if (!std::isfinite(d0)) throw NumericalAbort(0, "non-finite initial measurement");
  return d0;
}

class Loop {
 public:
  Loop(const Scenario& sc, const RangeController& law)
      : sc_(sc),
        law_(law),
        rc_(sc.command.is_constant() ? std::optional(sc.command.constant_value())
                                     : std::nullopt),
        state_(sc.initial_state),
        filter_(sc.filter_gain, initial_measurement(sc)) {
    state_.theta = wrap_angle(state_.theta);
  }

  TrajectoryLog execute() {
    const std::size_t n = sc_.step_count();
    const auto every = static_cast<std::size_t>(sc_.log_every);
    TrajectoryLog log;
    log.records.reserve(sc_.record_count());

    for (std::size_t k = 0;; ++k) {
      const double t_k = static_cast<double>(k) * sc_.dt;
      const std::size_t record = k / every;
      Eval ev = evaluate(t_k, k, record);
      const bool logged = k % every == 0;
      LogRecord rec;
      if (logged) rec = make_record(t_k, ev);
      if (k == n) {
        if (logged) log.records.push_back(rec);
        break;
      }

      // Split the step when the commanded turn is too large to resolve.
      double remaining = sc_.dt;
      double tau = t_k;
      while (true) {
        double h = remaining;
        const double turn = std::abs(ev.out.u) * remaining;
        if (std::isfinite(sc_.max_turn_per_step) && turn > sc_.max_turn_per_step) {
          const double pieces = std::ceil(turn / sc_.max_turn_per_step);
          h = remaining / pieces;
        }
        state_ = step(state_, ev.out.u, sc_.params.vc, h);
        if (!finite_state(state_)) {
          throw NumericalAbort(record, "non-finite robot state");
        }
        last_h_ = h;
        remaining -= h;
        tau += h;
        if (!(remaining > sc_.dt * 1e-12)) break;
        ev = evaluate(tau, k, record);
        rec.clamp_d = rec.clamp_d || ev.out.diag.clamped_d;
        rec.clamp_alpha = rec.clamp_alpha || ev.out.diag.clamped_alpha;
        rec.clamp_u = rec.clamp_u || ev.out.diag.clamped_u;
      }
      if (logged) log.records.push_back(rec);
    }
    return log;
  }

 private:
  struct Eval {
    double d_meas = 0.0;
    double xi = 0.0;
    RefSample ref;
    ControlOutput out;
  };

  Eval evaluate(double t, std::size_t cursor, std::size_t record) {
    Eval ev;
    ev.d_meas = measure(state_, sc_.targets, sc_.noise, cursor);
    if (last_h_ > 0.0) filter_.update(ev.d_meas, last_h_);
    ev.xi = sc_.rate_source == RateSource::kWashout
                ? filter_.xi()
                : sc_.params.vc * std::cos(true_phi(state_, sc_.targets));
    ev.ref = sc_.command.eval(t);
    try {
      ev.out = law_(ev.d_meas, ev.xi, ev.ref, t);
    } catch (const std::exception& e) {
      throw NumericalAbort(record, e.what());
    }
    if (!std::isfinite(ev.d_meas) || !std::isfinite(ev.xi) ||
        !std::isfinite(ev.out.u)) {
      throw NumericalAbort(record, "non-finite measurement or control");
    }
    return ev;
  }

  LogRecord make_record(double t, const Eval& ev) const {
    const auto& p = sc_.params;
    LogRecord rec;
    rec.t = t;
    rec.x = state_.x;
    rec.y = state_.y;
    rec.theta = state_.theta;
    rec.d_true = sc_.targets.min_distance(state_.position());
    rec.d_meas = ev.d_meas;
    rec.xi = ev.xi;
    rec.u = ev.out.u;
    rec.r = ev.ref.r;
    rec.r_dot = ev.ref.r_dot;
    rec.phi = true_phi(state_, sc_.targets);
    rec.e1 = rec.d_true - ev.ref.r;
    const double d_dot = p.vc * std::cos(rec.phi);
    const double s = -p.k2 * sat(rec.e1 / p.k3) + ev.ref.r_dot;
    rec.e2_true = d_dot - s;
    rec.e2_filt = ev.out.diag.e2;
    rec.V = rc_ ? lyapunov_V3(rec.d_true, d_dot, *rc_, p)
                : lyapunov_V4(rec.d_true, ev.ref.r, rec.e2_true, p);
    rec.clamp_d = ev.out.diag.clamped_d;
    rec.clamp_alpha = ev.out.diag.clamped_alpha;
    rec.clamp_u = ev.out.diag.clamped_u;
    return rec;
  }

  const Scenario& sc_;
  const RangeController& law_;
  std::optional<double> rc_;
  RobotState state_;
  WashoutFilter filter_;
  double last_h_ = 0.0;
};

}  // namespace

TrajectoryLog run(const Scenario& sc, const RangeController& law) {
  sc.validate();
  return Loop(sc, law).execute();
}

TrajectoryLog run(const Scenario& sc) {
  sc.validate();
  const BacksteppingController law(sc.params, sc.command);
  return Loop(sc, law).execute();
}

std::vector<BatchItem> run_batch(const std::vector<Scenario>& scenarios,
                                 unsigned threads) {
  std::vector<BatchItem> out(scenarios.size());
  if (scenarios.empty()) return out;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(scenarios.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      try {
        out[i].log = run(scenarios[i]);
      } catch (const std::exception& e) {
        out[i].error = e.what();
      }
    }
  };
  if (threads == 1) {
    worker();
    return out;
  }
  std::vector<std::jthread> pool;
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  return out;
}

InteriorEquilibriumReport stress_interior_equilibrium(const ControllerParams& p,
                                                      double rc,
                                                      double perturbation,
                                                      double t_end) {
  p.validate();
  InteriorEquilibriumReport rep;
  rep.gain_condition = p.k1 * p.k2 >= 8.0 * p.vc * p.vc;
  constexpr double kHalfPi = std::numbers::pi / 2.0;

  for (double d_star : interior_equilibria(p, rc)) {
    InteriorEquilibriumProbe probe;
    probe.d_star = d_star;
    const auto at_rest = compute_u_constant(d_star, 0.0, rc, p);
    probe.phi_rate_residual = at_rest.u + p.vc / d_star;

    // Target at the origin, robot on the +x axis heading -pi/2 so that
    // eta = 0 and phi = -pi/2.
    Scenario sc;
    sc.targets = TargetSet({Point2{0.0, 0.0}});
    sc.command = RefCommand::constant(rc);
    sc.params = p;
    sc.initial_state = {d_star + perturbation, 0.0, -kHalfPi};
    sc.rate_source = RateSource::kExact;
    sc.dt = 0.001;
    sc.t_end = t_end;
    const auto log = run(sc);
    for (const auto& rec : log.records) {
      const double dev = std::hypot(rec.d_true - d_star, wrap_angle(rec.phi + kHalfPi));
      probe.max_excursion = std::max(probe.max_excursion, dev);
      if (!probe.escaped && dev > 0.1) {
        probe.escaped = true;
        probe.escape_time = rec.t;
      }
    }
    rep.probes.push_back(probe);
  }
  return rep;
}

}  // namespace encircle
