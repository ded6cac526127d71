#pragma once

#include "stochmatch/experiment.hpp"

#include <iosfwd>
#include <string>

namespace stochmatch {

constexpr int kReportSchemaVersion = 1;

/// Pretty-printed JSON with a fixed key order.
std::string report_to_json(const Report& report);
/// Inverse of report_to_json; throws ParseError on malformed input.
Report report_from_json(const std::string& text);

std::string spec_to_json(const ExperimentSpec& spec);
/// Missing keys keep their defaults; unknown keys are errors.
ExperimentSpec spec_from_json(const std::string& text);

/// One header row plus one row per trial.
void write_trials_csv(std::ostream& out, const Report& report);

/// "out.json" -> "out.csv"; any other name gets ".csv" appended.
std::string csv_path_for(const std::string& json_path);

/// Writes the JSON report to `path` and the trial CSV next to it; throws IoError with the path.
void emit_report(const Report& report, const std::string& path);
Report read_report(const std::string& path);

}  // namespace stochmatch
