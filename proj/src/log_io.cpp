#include "encircle/log_io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace encircle {
namespace {

struct DoubleField {
  const char* name;
  double LogRecord::*member;
};

struct FlagField {
  const char* name;
  bool LogRecord::*member;
};

constexpr std::array<DoubleField, 15> kDoubles{{
    {"t", &LogRecord::t},           {"x", &LogRecord::x},
    {"y", &LogRecord::y},           {"theta", &LogRecord::theta},
    {"d_true", &LogRecord::d_true}, {"d_meas", &LogRecord::d_meas},
    {"xi", &LogRecord::xi},         {"u", &LogRecord::u},
    {"r", &LogRecord::r},           {"r_dot", &LogRecord::r_dot},
    {"e1", &LogRecord::e1},         {"e2_true", &LogRecord::e2_true},
    {"e2_filt", &LogRecord::e2_filt}, {"phi", &LogRecord::phi},
    {"V", &LogRecord::V},
}};

constexpr std::array<FlagField, 3> kFlags{{
    {"clamp_d", &LogRecord::clamp_d},
    {"clamp_alpha", &LogRecord::clamp_alpha},
    {"clamp_u", &LogRecord::clamp_u},
}};

constexpr std::string_view kHeader =
    "t,x,y,theta,d_true,d_meas,xi,u,r,r_dot,e1,e2_true,e2_filt,phi,V,"
    "clamp_d,clamp_alpha,clamp_u";

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error("csv line " + std::to_string(line) +
                             ": bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string_view csv_header() { return kHeader; }

void write_csv(std::ostream& os, const TrajectoryLog& log) {
  os << kHeader << '\n';
  char buf[32];
  for (const auto& rec : log.records) {
    bool first = true;
    for (const auto& f : kDoubles) {
      if (!first) os << ',';
      first = false;
      std::snprintf(buf, sizeof buf, "%.17g", rec.*f.member);
      os << buf;
    }
    for (const auto& f : kFlags) os << ',' << (rec.*f.member ? '1' : '0');
    os << '\n';
  }
}

void write_csv(const std::string& path, const TrajectoryLog& log) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(os, log);
  if (!os) throw std::runtime_error("write failed: " + path);
}

TrajectoryLog read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kHeader) {
    throw std::runtime_error("csv: unexpected header");
  }
  TrajectoryLog log;
  std::size_t lineno = 1;
  constexpr std::size_t kCols = kDoubles.size() + kFlags.size();
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::array<std::string_view, kCols> cells;
    std::size_t n = 0, start = 0;
    std::string_view sv(line);
    while (true) {
      const auto comma = sv.find(',', start);
      if (n == kCols) throw std::runtime_error("csv line " + std::to_string(lineno) + ": too many fields");
      cells[n++] = sv.substr(start, comma == std::string_view::npos ? sv.npos : comma - start);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (n != kCols) {
      throw std::runtime_error("csv line " + std::to_string(lineno) + ": expected " +
                               std::to_string(kCols) + " fields");
    }
    LogRecord rec;
    for (std::size_t i = 0; i < kDoubles.size(); ++i) {
      rec.*kDoubles[i].member = parse_double(cells[i], lineno);
    }
    for (std::size_t i = 0; i < kFlags.size(); ++i) {
      const auto c = cells[kDoubles.size() + i];
      if (c != "0" && c != "1") {
        throw std::runtime_error("csv line " + std::to_string(lineno) + ": bad flag");
      }
      rec.*kFlags[i].member = c == "1";
    }
    log.records.push_back(rec);
  }
  return log;
}

TrajectoryLog read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_csv(is);
}

void write_jsonl(std::ostream& os, const TrajectoryLog& log) {
  for (const auto& rec : log.records) {
    nlohmann::ordered_json j;
    for (const auto& f : kDoubles) j[f.name] = rec.*f.member;
    for (const auto& f : kFlags) j[f.name] = rec.*f.member;
    os << j.dump() << '\n';
  }
}

void write_jsonl(const std::string& path, const TrajectoryLog& log) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_jsonl(os, log);
}

}  // namespace encircle
