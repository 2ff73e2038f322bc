#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "encircle/trajectory.hpp"

namespace encircle {

/// Header line of the trajectory CSV (no trailing newline).
std::string_view csv_header();

/// Values use 17 significant digits so a round trip is lossless; clamp flags
/// are written as 0/1.
void write_csv(std::ostream& os, const TrajectoryLog& log);
void write_csv(const std::string& path, const TrajectoryLog& log);

/// Parses a CSV produced by write_csv. Throws std::runtime_error on a header
/// mismatch or a malformed row.
TrajectoryLog read_csv(std::istream& is);
TrajectoryLog read_csv(const std::string& path);

/// One JSON object per record, keys as in the CSV header.
void write_jsonl(std::ostream& os, const TrajectoryLog& log);
void write_jsonl(const std::string& path, const TrajectoryLog& log);

}  // namespace encircle
