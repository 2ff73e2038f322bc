#include "encircle/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace encircle {

using nlohmann::ordered_json;

int count_sign_changes(const TrajectoryLog& log, double t_from, double t_to) {
  int changes = 0;
  int prev = 0;
  for (const auto& rec : log.records) {
    if (rec.t < t_from || rec.t > t_to) continue;
    const int s = (rec.e1 > 0.0) - (rec.e1 < 0.0);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

std::optional<double> settle_time(const TrajectoryLog& log, double band_fraction) {
  std::optional<double> t;
  for (auto it = log.records.rbegin(); it != log.records.rend(); ++it) {
    if (std::abs(it->e1) > band_fraction * std::abs(it->r)) break;
    t = it->t;
  }
  return t;
}

double rms_e1(const TrajectoryLog& log, double t_from) {
  double acc = 0.0;
  std::size_t n = 0;
  for (const auto& rec : log.records) {
    if (rec.t < t_from) continue;
    acc += rec.e1 * rec.e1;
    ++n;
  }
  if (n == 0) return std::nan("");
  return std::sqrt(acc / static_cast<double>(n));
}

RunMetrics compute_metrics(const TrajectoryLog& log) {
  RunMetrics m;
  if (log.empty()) return m;
  const double t0 = log.records.front().t;
  const double t_end = log.back().t;
  m.steady_rms_e1 = rms_e1(log, t0 + 0.75 * (t_end - t0));
  m.sign_changes = count_sign_changes(log, t0 + 0.4 * (t_end - t0), t_end);
  m.oscillating = m.sign_changes >= 10;
  m.settle_time = settle_time(log);
  m.final_abs_e1 = std::abs(log.back().e1);
  return m;
}

DecayFit fit_band_decay(const TrajectoryLog& log, const ControllerParams& p,
                        double floor) {
  for (const auto& rec : log.records) {
    if (std::abs(rec.e1) < p.k3) return fit_decay_rate(log, p, rec.t, floor);
  }
  throw std::runtime_error("error never enters the linear band");
}

ScenarioReport analyze(const Scenario& sc, const TrajectoryLog& log,
                       const PhaseOptions& phase_opts) {
  ScenarioReport rep;
  rep.conditions = scenario_conditions(sc);
  rep.linearization = linearize(sc.params);
  if (sc.command.is_constant()) {
    rep.phases = detect_phases(log, sc.params, sc.command.constant_value(), phase_opts);
  }
  try {
    rep.decay = fit_band_decay(log, sc.params);
  } catch (const std::exception& e) {
    rep.decay_error = e.what();
  }
  rep.metrics = compute_metrics(log);
  return rep;
}

namespace {

ordered_json opt(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json conditions_json(const ConditionReport& rep) {
  ordered_json j;
  j["all_passed"] = rep.all_passed();
  j["checks"] = ordered_json::array();
  for (const auto& c : rep.checks) {
    j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return j;
}

}  // namespace

std::string to_json(const ConditionReport& rep) {
  return conditions_json(rep).dump(2);
}

std::string to_json(const ScenarioReport& rep) {
  ordered_json j;
  j["conditions"] = conditions_json(rep.conditions);

  const auto& lin = rep.linearization;
  ordered_json L;
  L["A"] = {{lin.A[0][0], lin.A[0][1]}, {lin.A[1][0], lin.A[1][1]}};
  L["eigenvalues"] = ordered_json::array();
  for (const auto& ev : lin.eigenvalues) {
    L["eigenvalues"].push_back({{"re", ev.real()}, {"im", ev.imag()}});
  }
  L["delta"] = lin.delta;
  L["rho"] = lin.rho;
  L["hurwitz"] = lin.hurwitz;
  L["c_bound"] = opt(lin.c_bound);
  j["linearization"] = L;

  if (rep.phases) {
    const auto& ph = *rep.phases;
    j["phases"] = {{"t1", opt(ph.t1)},
                   {"t2", opt(ph.t2)},
                   {"t3", opt(ph.t3)},
                   {"t4", opt(ph.t4)},
                   {"mean_ddot", opt(ph.mean_ddot)},
                   {"max_phi_dev", opt(ph.max_phi_dev)}};
  } else {
    j["phases"] = nullptr;
  }

  if (rep.decay) {
    j["decay_fit"] = {{"rho_hat", rep.decay->rho_hat},
                      {"t_begin", rep.decay->t_begin},
                      {"t_end", rep.decay->t_end},
                      {"samples", rep.decay->samples}};
  } else {
    j["decay_fit"] = {{"error", rep.decay_error}};
  }

  const auto& m = rep.metrics;
  j["metrics"] = {{"steady_rms_e1", m.steady_rms_e1},
                  {"sign_changes", m.sign_changes},
                  {"oscillating", m.oscillating},
                  {"settle_time", opt(m.settle_time)},
                  {"final_abs_e1", m.final_abs_e1}};
  return j.dump(2);
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "value,t1,settle_time,steady_state_error,fitted_rho,oscillating,error\n";
  auto cell = [&](const std::optional<double>& v) {
    if (v) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", *v);
      os << buf;
    }
    os << ',';
  };
  for (const auto& r : rows) {
    os << r.value << ',';
    cell(r.t1);
    cell(r.settle_time);
    cell(r.steady_error);
    cell(r.rho_hat);
    os << (r.oscillating ? 1 : 0) << ',';
    // errors are one-liners; keep the CSV single-column safe
    std::string err = r.error;
    for (auto& c : err) {
      if (c == ',' || c == '\n') c = ';';
    }
    os << err << '\n';
  }
  return os.str();
}

}  // namespace encircle
