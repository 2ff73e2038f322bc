#pragma once

#include <stdexcept>
#include <string>

#include "encircle/analysis.hpp"
#include "encircle/harness.hpp"

namespace encircle {

/// Invalid, unreadable or schema-violating scenario config.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputOptions {
  std::string stem;    // file name prefix; defaults to the config file stem
  bool jsonl = false;  // also write the trajectory as JSON lines
};

struct AnalysisOptions {
  bool enabled = true;
  PhaseOptions phases;
};

struct Config {
  std::string name;
  std::string description;
  Scenario scenario;
  OutputOptions output;
  AnalysisOptions analysis;
};

/// Parses a JSON scenario document. Unknown keys, wrong types and invalid
/// scenario values raise ConfigError.
///
///   initial_state: {x, y, theta | theta_over_pi}          (required)
///   targets:       [[x, y], ...]                          default [[2, 2]]
///   command:       {type: constant, rc}
///                  {type: sinusoid, offset, amplitude, omega, phase?}
///                  {type: sum, terms: [command, ...]}     default rc = 2
///   params:        {vc, k1, k2, k3, h, eps1, eps2, u_max}  all optional
///   noise:         {sigma, seed}
///   dt, t_end, log_every, rate_source (washout | exact),
///   max_turn_per_step (number, or null to disable step splitting)
///   output:        {stem, jsonl}
///   analysis:      {enabled, angle_tol, dwell}
///   name, description: free text
Config parse_config(const std::string& json_text);

/// Reads and parses a file; the output stem defaults to the file stem.
Config load_config(const std::string& path);

/// Sets one scenario quantity from a string, as used by sweeps and CLI
/// overrides. Names: vc k1 k2 k3 h eps1 eps2 u_max sigma seed dt t_end rc
/// x y theta pose. Angles accept a trailing "pi" ("-0.6pi"); pose is
/// "x:y:theta". Throws ConfigError on an unknown name or bad value.
void apply_param(Config& cfg, const std::string& name, const std::string& value);

/// Parses a number with an optional trailing "pi" multiplier.
double parse_angle(const std::string& text);

}  // namespace encircle
