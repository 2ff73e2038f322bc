#include "encircle/config.hpp"

#include <charconv>
#include <cstdint>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace encircle {

using nlohmann::json;

namespace {

void allow_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + ": must be finite");
  return x;
}

void read_number(const json& obj, const char* key, const std::string& where,
                 double& out) {
  if (obj.contains(key)) out = number(obj.at(key), where + "." + key);
}

std::string text(const json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError(where + ": expected a string");
  return v.get<std::string>();
}

bool boolean(const json& v, const std::string& where) {
  if (!v.is_boolean()) throw ConfigError(where + ": expected true or false");
  return v.get<bool>();
}

RobotState parse_state(const json& j) {
  allow_keys(j, "initial_state", {"x", "y", "theta", "theta_over_pi"});
  if (!j.contains("x") || !j.contains("y")) {
    throw ConfigError("initial_state: x and y are required");
  }
  if (j.contains("theta") == j.contains("theta_over_pi")) {
    throw ConfigError("initial_state: give exactly one of theta, theta_over_pi");
  }
  RobotState s;
  s.x = number(j.at("x"), "initial_state.x");
  s.y = number(j.at("y"), "initial_state.y");
  s.theta = j.contains("theta")
                ? number(j.at("theta"), "initial_state.theta")
                : number(j.at("theta_over_pi"), "initial_state.theta_over_pi") *
                      std::numbers::pi;
  return s;
}

TargetSet parse_targets(const json& j) {
  if (!j.is_array()) throw ConfigError("targets: expected an array of [x, y]");
  std::vector<Point2> pts;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "targets[" + std::to_string(i) + "]";
    const auto& p = j[i];
    if (!p.is_array() || p.size() != 2) throw ConfigError(where + ": expected [x, y]");
    pts.push_back({number(p[0], where), number(p[1], where)});
  }
  try {
    return TargetSet(std::move(pts));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("targets: ") + e.what());
  }
}

// Appends the terms of one command object; nested sums are flattened.
void parse_terms(const json& j, const std::string& where, std::vector<RefTerm>& out) {
  if (!j.is_object() || !j.contains("type")) {
    throw ConfigError(where + ": expected an object with a type");
  }
  const std::string type = text(j.at("type"), where + ".type");
  if (type == "constant") {
    allow_keys(j, where, {"type", "rc"});
    if (!j.contains("rc")) throw ConfigError(where + ": rc is required");
    out.push_back(ConstantTerm{number(j.at("rc"), where + ".rc")});
  } else if (type == "sinusoid") {
    allow_keys(j, where, {"type", "offset", "amplitude", "omega", "phase"});
    for (const char* k : {"offset", "amplitude", "omega"}) {
      if (!j.contains(k)) throw ConfigError(where + ": " + k + " is required");
    }
    SinusoidTerm s;
    s.offset = number(j.at("offset"), where + ".offset");
    s.amplitude = number(j.at("amplitude"), where + ".amplitude");
    s.omega = number(j.at("omega"), where + ".omega");
    read_number(j, "phase", where, s.phase);
    out.push_back(s);
  } else if (type == "sum") {
    allow_keys(j, where, {"type", "terms"});
    if (!j.contains("terms") || !j.at("terms").is_array()) {
      throw ConfigError(where + ": terms must be an array");
    }
    const auto& terms = j.at("terms");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      parse_terms(terms[i], where + ".terms[" + std::to_string(i) + "]", out);
    }
  } else {
    throw ConfigError(where + ": unknown command type '" + type + "'");
  }
}

RefCommand parse_command(const json& j, const std::string& where) {
  std::vector<RefTerm> terms;
  parse_terms(j, where, terms);
  try {
    return RefCommand::sum(std::move(terms));
  } catch (const std::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

void parse_params(const json& j, Scenario& sc) {
  allow_keys(j, "params", {"vc", "k1", "k2", "k3", "h", "eps1", "eps2", "u_max"});
  auto& p = sc.params;
  read_number(j, "vc", "params", p.vc);
  read_number(j, "k1", "params", p.k1);
  read_number(j, "k2", "params", p.k2);
  read_number(j, "k3", "params", p.k3);
  read_number(j, "h", "params", sc.filter_gain);
  read_number(j, "eps1", "params", p.eps1);
  read_number(j, "eps2", "params", p.eps2);
  if (j.contains("u_max") && !j.at("u_max").is_null()) {
    p.u_max = number(j.at("u_max"), "params.u_max");
  }
}

std::uint64_t parse_seed(const json& v) {
  if (!v.is_number_unsigned()) {
    throw ConfigError("noise.seed: expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

void validate_scenario(const Scenario& sc) {
  try {
    sc.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

Config parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  allow_keys(doc, "config",
             {"name", "description", "initial_state", "targets", "command", "params",
              "noise", "dt", "t_end", "log_every", "rate_source", "max_turn_per_step",
              "output", "analysis"});

  Config cfg;
  auto& sc = cfg.scenario;
  if (doc.contains("name")) cfg.name = text(doc.at("name"), "name");
  if (doc.contains("description")) cfg.description = text(doc.at("description"), "description");
  if (!doc.contains("initial_state")) throw ConfigError("config: initial_state is required");
  sc.initial_state = parse_state(doc.at("initial_state"));
  if (doc.contains("targets")) sc.targets = parse_targets(doc.at("targets"));
  if (doc.contains("command")) sc.command = parse_command(doc.at("command"), "command");
  if (doc.contains("params")) parse_params(doc.at("params"), sc);

  if (doc.contains("noise")) {
    const auto& n = doc.at("noise");
    allow_keys(n, "noise", {"sigma", "seed"});
    read_number(n, "sigma", "noise", sc.noise.sigma);
    if (n.contains("seed")) sc.noise.seed = parse_seed(n.at("seed"));
  }

  read_number(doc, "dt", "config", sc.dt);
  read_number(doc, "t_end", "config", sc.t_end);
  if (doc.contains("log_every")) {
    const auto& v = doc.at("log_every");
    if (!v.is_number_integer()) throw ConfigError("log_every: expected an integer");
    sc.log_every = v.get<int>();
  }
  if (doc.contains("rate_source")) {
    const auto s = text(doc.at("rate_source"), "rate_source");
    if (s == "washout") {
      sc.rate_source = RateSource::kWashout;
    } else if (s == "exact") {
      sc.rate_source = RateSource::kExact;
    } else {
      throw ConfigError("rate_source: expected washout or exact");
    }
  }
  if (doc.contains("max_turn_per_step")) {
    const auto& v = doc.at("max_turn_per_step");
    sc.max_turn_per_step = v.is_null() ? std::numeric_limits<double>::infinity()
                                       : number(v, "max_turn_per_step");
  }

  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    allow_keys(o, "output", {"stem", "jsonl"});
    if (o.contains("stem")) cfg.output.stem = text(o.at("stem"), "output.stem");
    if (o.contains("jsonl")) cfg.output.jsonl = boolean(o.at("jsonl"), "output.jsonl");
  }
  if (doc.contains("analysis")) {
    const auto& a = doc.at("analysis");
    allow_keys(a, "analysis", {"enabled", "angle_tol", "dwell"});
    if (a.contains("enabled")) cfg.analysis.enabled = boolean(a.at("enabled"), "analysis.enabled");
    read_number(a, "angle_tol", "analysis", cfg.analysis.phases.angle_tol);
    read_number(a, "dwell", "analysis", cfg.analysis.phases.dwell);
  }

  validate_scenario(sc);
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  Config cfg = parse_config(ss.str());
  if (cfg.output.stem.empty()) {
    cfg.output.stem = std::filesystem::path(path).stem().string();
  }
  return cfg;
}

double parse_angle(const std::string& text_in) {
  std::string s = text_in;
  double scale = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    scale = std::numbers::pi;
    s.resize(s.size() - 2);
    if (s.empty() || s == "+") s = "1";
    if (s == "-") s = "-1";
  }
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError("bad number '" + text_in + "'");
  }
  return v * scale;
}

void apply_param(Config& cfg, const std::string& name, const std::string& value) {
  auto& sc = cfg.scenario;
  auto& p = sc.params;
  const auto num = [&] { return parse_angle(value); };

  if (name == "vc") p.vc = num();
  else if (name == "k1") p.k1 = num();
  else if (name == "k2") p.k2 = num();
  else if (name == "k3") p.k3 = num();
  else if (name == "h") sc.filter_gain = num();
  else if (name == "eps1") p.eps1 = num();
  else if (name == "eps2") p.eps2 = num();
  else if (name == "u_max") p.u_max = num();
  else if (name == "sigma") sc.noise.sigma = num();
  else if (name == "dt") sc.dt = num();
  else if (name == "t_end") sc.t_end = num();
  else if (name == "x") sc.initial_state.x = num();
  else if (name == "y") sc.initial_state.y = num();
  else if (name == "theta") sc.initial_state.theta = num();
  else if (name == "seed") {
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), seed);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
      throw ConfigError("seed: expected a non-negative integer, got '" + value + "'");
    }
    sc.noise.seed = seed;
  } else if (name == "rc") {
    try {
      sc.command = RefCommand::constant(num());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("rc: ") + e.what());
    }
  } else if (name == "pose") {
    std::vector<std::string> parts;
    std::stringstream ss(value);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3) throw ConfigError("pose: expected x:y:theta, got '" + value + "'");
    sc.initial_state = {parse_angle(parts[0]), parse_angle(parts[1]), parse_angle(parts[2])};
  } else {
    throw ConfigError("unknown parameter '" + name + "'");
  }
  validate_scenario(sc);
}

}  // namespace encircle
