#pragma once

#include <optional>
#include <string>
#include <vector>

#include "encircle/analysis.hpp"
#include "encircle/controller.hpp"
#include "encircle/harness.hpp"
#include "encircle/trajectory.hpp"

namespace encircle {

/// Summary metrics of one run.
struct RunMetrics {
  double steady_rms_e1 = 0.0;     // RMS of e1 over the last 25% of the run
  int sign_changes = 0;           // sign flips of d - r on [0.4 t_end, t_end]
  bool oscillating = false;       // sign_changes >= 10
  std::optional<double> settle_time;  // |e1| <= 1% of r from here on
  double final_abs_e1 = 0.0;
};

struct ScenarioReport {
  ConditionReport conditions;
  LinearizationReport linearization;
  std::optional<PhaseReport> phases;  // constant commands only
  std::optional<DecayFit> decay;
  std::string decay_error;            // why the fit was skipped
  RunMetrics metrics;
};

/// Number of sign changes of e1 on [t_from, t_to]; exact zeros are skipped.
int count_sign_changes(const TrajectoryLog& log, double t_from, double t_to);

/// Earliest logged time after which |e1| <= band_fraction * |r| holds for
/// every remaining record.
std::optional<double> settle_time(const TrajectoryLog& log,
                                  double band_fraction = 0.01);

/// RMS of e1 over records with t >= t_from.
double rms_e1(const TrajectoryLog& log, double t_from);

RunMetrics compute_metrics(const TrajectoryLog& log);

/// Decay fit over the linear band: starts at the first record with
/// |e1| < k3 and stops once |z| drops below `floor`.
DecayFit fit_band_decay(const TrajectoryLog& log, const ControllerParams& p,
                        double floor = 1e-6);

ScenarioReport analyze(const Scenario& sc, const TrajectoryLog& log,
                       const PhaseOptions& phase_opts = {});

/// Pretty-printed JSON document.
std::string to_json(const ScenarioReport& rep);
std::string to_json(const ConditionReport& rep);

struct SweepRow {
  std::string value;
  std::optional<double> t1;
  std::optional<double> settle_time;
  std::optional<double> steady_error;
  std::optional<double> rho_hat;
  bool oscillating = false;
  std::string error;  // non-empty when the run failed
};

/// Header: value,t1,settle_time,steady_state_error,fitted_rho,oscillating,error.
/// Missing values are empty cells.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace encircle
