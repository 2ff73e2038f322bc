#include "encircle/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "encircle/config.hpp"
#include "encircle/harness.hpp"
#include "encircle/log_io.hpp"
#include "encircle/report.hpp"
#include "json.hpp"

namespace encircle {

namespace fs = std::filesystem;

namespace {

struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("ENCIRCLE_OUT"); env && *env) return env;
  return "out";
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& body) {
  std::ofstream os(path);
  os << body;
  if (!os) throw OutputError("write failed: " + path.string());
}

void print_conditions(std::ostream& out, const ConditionReport& rep) {
  for (const auto& c : rep.checks) {
    out << (c.passed ? "  ok    " : "  FAIL  ") << c.name;
    if (!c.detail.empty()) out << "  (" << c.detail << ")";
    out << '\n';
  }
}

std::string fmt(const std::optional<double>& v) {
  if (!v) return "-";
  std::ostringstream os;
  os << *v;
  return os.str();
}

std::vector<std::string> split_values(const std::string& list) {
  std::vector<std::string> values;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    values.push_back(item.substr(b, e - b + 1));
  }
  return values;
}

int cmd_run(const std::string& cfg_path, const std::string& out_flag,
            const std::optional<std::uint64_t>& seed,
            const std::optional<double>& dt, std::ostream& out, std::ostream& err) {
  Config cfg;
  try {
    cfg = load_config(cfg_path);
    if (seed) apply_param(cfg, "seed", std::to_string(*seed));
    if (dt) {
      std::ostringstream s;
      s.precision(17);
      s << *dt;
      apply_param(cfg, "dt", s.str());
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  const Scenario& sc = cfg.scenario;
  TrajectoryLog log;
  try {
    log = run(sc);
  } catch (const NumericalAbort& e) {
    err << "numerical abort: " << e.what() << '\n';
    return kExitNumericalAbort;
  }

  nlohmann::ordered_json doc;
  if (cfg.analysis.enabled) {
    doc = nlohmann::ordered_json::parse(to_json(analyze(sc, log, cfg.analysis.phases)));
  } else {
    doc["conditions"] = nlohmann::ordered_json::parse(to_json(scenario_conditions(sc)));
  }
  doc["run"] = {{"config", cfg_path},
                {"name", cfg.name},
                {"dt", sc.dt},
                {"t_end", sc.t_end},
                {"seed", sc.noise.seed},
                {"records", log.size()}};

  const fs::path dir = resolve_out_dir(out_flag);
  const std::string& stem = cfg.output.stem;
  try {
    ensure_dir(dir);
    write_csv((dir / (stem + ".csv")).string(), log);
    if (cfg.output.jsonl) write_jsonl((dir / (stem + ".jsonl")).string(), log);
    write_text(dir / (stem + ".analysis.json"), doc.dump(2) + "\n");
    std::error_code ec;
    fs::copy_file(cfg_path, dir / (stem + ".config.json"),
                  fs::copy_options::overwrite_existing, ec);
    if (ec) throw OutputError("cannot archive config: " + ec.message());
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << '\n';
    return kExitOutputError;
  }

  const auto& last = log.back();
  out << stem << ": " << log.size() << " records, final d = " << last.d_true
      << ", e1 = " << last.e1 << '\n';
  if (doc.contains("decay_fit") && doc["decay_fit"].contains("rho_hat")) {
    out << "  fitted rho = " << doc["decay_fit"]["rho_hat"].get<double>()
        << " (linearization " << doc["linearization"]["rho"].get<double>() << ")\n";
  }
  out << "  written to " << dir.string() << '\n';
  return kExitOk;
}

int cmd_sweep(const std::string& cfg_path, const std::string& param,
              const std::string& value_list, const std::string& out_flag,
              std::ostream& out, std::ostream& err) {
  const auto values = split_values(value_list);
  if (values.empty()) {
    err << "config error: empty value list\n";
    return kExitConfigError;
  }
  Config base;
  std::vector<Config> configs;
  try {
    base = load_config(cfg_path);
    for (const auto& v : values) {
      configs.push_back(base);
      apply_param(configs.back(), param, v);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  std::vector<Scenario> scenarios;
  for (const auto& c : configs) scenarios.push_back(c.scenario);
  const auto results = run_batch(scenarios);

  std::vector<SweepRow> rows;
  bool aborted = false;
  for (std::size_t i = 0; i < results.size(); ++i) {
    SweepRow row;
    row.value = values[i];
    if (!results[i].log) {
      row.error = results[i].error;
      aborted = true;
      rows.push_back(row);
      continue;
    }
    const auto rep = analyze(scenarios[i], *results[i].log, base.analysis.phases);
    if (rep.phases) row.t1 = rep.phases->t1;
    row.settle_time = rep.metrics.settle_time;
    row.steady_error = rep.metrics.steady_rms_e1;
    if (rep.decay) row.rho_hat = rep.decay->rho_hat;
    row.oscillating = rep.metrics.oscillating;
    rows.push_back(row);
  }

  const fs::path dir = resolve_out_dir(out_flag);
  const std::string stem = base.output.stem + "_sweep_" + param;
  try {
    ensure_dir(dir);
    write_text(dir / (stem + ".csv"), sweep_csv(rows));
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (!results[i].log) continue;
      write_csv((dir / (stem + "_" + std::to_string(i) + ".csv")).string(), *results[i].log);
    }
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << '\n';
    return kExitOutputError;
  }

  out << param << " sweep, " << rows.size() << " runs\n";
  for (const auto& r : rows) {
    out << "  " << param << "=" << r.value;
    if (!r.error.empty()) {
      out << "  failed: " << r.error << '\n';
      continue;
    }
    out << "  t1=" << fmt(r.t1) << "  settle=" << fmt(r.settle_time)
        << "  rms_e1=" << fmt(r.steady_error) << "  rho=" << fmt(r.rho_hat)
        << (r.oscillating ? "  oscillating" : "") << '\n';
  }
  out << "  summary: " << (dir / (stem + ".csv")).string() << '\n';
  return aborted ? kExitNumericalAbort : kExitOk;
}

int cmd_check(const std::string& cfg_path, std::ostream& out, std::ostream& err) {
  Config cfg;
  try {
    cfg = load_config(cfg_path);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  const auto rep = scenario_conditions(cfg.scenario);
  out << (cfg.scenario.command.is_constant() ? "constant-radius" : "time-varying")
      << " conditions for " << cfg_path << ":\n";
  print_conditions(out, rep);
  return rep.all_passed() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Range-only encirclement simulator"};
  app.require_subcommand(1);

  std::string cfg_path, out_dir, param, value_list;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;

  auto* run_cmd = app.add_subcommand("run", "Simulate one scenario");
  run_cmd->add_option("config", cfg_path, "Scenario JSON")->required();
  run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_option("--seed", seed, "Noise seed override");
  run_cmd->add_option("--dt", dt, "Step size override");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a one-parameter sweep");
  sweep_cmd->add_option("config", cfg_path, "Scenario JSON")->required();
  sweep_cmd->add_option("--param", param, "Parameter name")->required();
  sweep_cmd->add_option("--values", value_list, "Comma-separated values")->required();
  sweep_cmd->add_option("--out", out_dir, "Output directory");

  auto* check_cmd = app.add_subcommand("check", "Check the convergence conditions");
  check_cmd->add_option("config", cfg_path, "Scenario JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  if (*run_cmd) return cmd_run(cfg_path, out_dir, seed, dt, out, err);
  if (*sweep_cmd) return cmd_sweep(cfg_path, param, value_list, out_dir, out, err);
  return cmd_check(cfg_path, out, err);
}

}  // namespace encircle
