#pragma once

// Batch evaluation of checks over point grids, as driven by the command line
// tool. A job is a JSON document; see README.md for the schema.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vielbein/solutions.hpp"

namespace vielbein {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kConfigSchemaVersion = 1;

enum class CheckKind { vacuum, einstein_maxwell, identities, reduction, appendixA, theta_density };

const char* check_name(CheckKind kind);
/// Throws ConfigError for unknown names.
CheckKind check_from_name(const std::string& name);

struct JobConfig {
    std::vector<CheckKind> checks;
    NamedSolution solution;
    std::vector<std::vector<double>> points;
    std::map<CheckKind, double> tolerances;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string report_name = "report.json";
    std::string csv_name = "points.csv";
    bool write_csv = false;
    std::optional<std::string> out_dir;
    /// Multiplies the inhomogeneous term of the spin-connection gauge law in
    /// the identities check; -1 is used to show the check notices.
    double omega_gauge_sign = 1.0;
    /// The "solution" and "grid" blocks as given, echoed into the report.
    std::string solution_echo;
    std::string grid_echo;
};

/// Parses and validates a job. Throws ConfigError (including for malformed
/// JSON, unknown solutions and bad expressions).
JobConfig parse_job(const std::string& json_text);

struct JobResult {
    std::string report_json;  // deterministic bytes
    std::string csv;          // empty unless requested
    bool pass = false;
};

/// Evaluates every check at every point. Evaluation failures propagate as
/// EvaluationError / DegenerateFrameError naming the point and the check.
JobResult run_job(const JobConfig& job);

/// Text listing of the solution corpus for --list-solutions.
std::string solutions_listing();

}  // namespace vielbein
