#pragma once

#include <vector>

namespace encircle {

/// One logged sample of a closed-loop run. Ground-truth columns (d_true,
/// e1, e2_true, phi, V) are computed from the true robot pose with respect
/// to the nearest target; d_meas/xi/e2_filt are what the controller saw.
struct LogRecord {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double d_true = 0.0;
  double d_meas = 0.0;
  double xi = 0.0;
  double u = 0.0;
  double r = 0.0;
  double r_dot = 0.0;
  double e1 = 0.0;       // d_true - r
  double e2_true = 0.0;  // true d' - s, s = -k2 sat(e1/k3) + r_dot
  double e2_filt = 0.0;  // xi - s as seen by the controller
  double phi = 0.0;
  double V = 0.0;        // V3 for constant commands, V4 otherwise
  bool clamp_d = false;
  bool clamp_alpha = false;
  bool clamp_u = false;

  bool operator==(const LogRecord&) const = default;
};

struct TrajectoryLog {
  std::vector<LogRecord> records;

  bool empty() const { return records.empty(); }
  std::size_t size() const { return records.size(); }
  const LogRecord& back() const { return records.back(); }
};

}  // namespace encircle
