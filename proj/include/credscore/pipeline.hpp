#pragma once

#include <filesystem>

#include "credscore/config.hpp"

namespace credscore {

// Stage artifact filenames inside the output directory.
inline constexpr std::string_view kCohortFile = "cohort.csv";
inline constexpr std::string_view kParamsFile = "params.txt";
inline constexpr std::string_view kCostHistoryFile = "cost_history.csv";
inline constexpr std::string_view kComparisonFile = "theta_comparison.txt";
inline constexpr std::string_view kVerifyReportFile = "verify_report.txt";
inline constexpr std::string_view kScoresFile = "scores.csv";
inline constexpr std::string_view kImportanceFile = "importance.csv";
inline constexpr std::string_view kScoreSummaryFile = "score_summary.txt";

// Verification thresholds.
inline constexpr double kOracleTolerance = 1e-4;
inline constexpr double kGradCheckTolerance = 1e-5;
inline constexpr double kGradCheckStep = 1e-6;

/// Generate a cohort and write it as CSV; echoes summary statistics.
void cmd_simulate(const PipelineConfig& cfg);

/// Split + fit the cohort CSV; writes the params file, the cost-history CSV
/// and a three-row injected / fitted-training / fitted-testing table.
void cmd_train(const PipelineConfig& cfg, const std::filesystem::path& cohort_path);

/// Cross-check a params file against the normal-equations oracle and the
/// finite-difference gradient probe; writes a report. Returns true on PASS.
bool cmd_verify(const PipelineConfig& cfg, const std::filesystem::path& cohort_path,
                const std::filesystem::path& params_path);

/// Score every student in the cohort CSV with a fitted params file; writes
/// the score CSV, the importance ranking CSV and a text summary.
void cmd_score(const std::filesystem::path& out_dir, const std::filesystem::path& cohort_path,
               const std::filesystem::path& params_path);

/// Run the configured stages in order (simulate, train, verify, score).
/// Returns a process exit code: 0, or 4 when verification fails.
int run_all(const PipelineConfig& cfg);

}  // namespace credscore
