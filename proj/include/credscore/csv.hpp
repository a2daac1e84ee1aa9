#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "credscore/cohort.hpp"

namespace credscore {

/// Exact cohort CSV header, Table-ordered columns.
inline constexpr std::string_view kCohortCsvHeader =
    "attendance,attentiveness,homework,understanding,prev_performance,performance";

/// Shortest decimal representation that round-trips the exact double.
std::string format_double(double v);

/// Write a cohort as UTF-8 CSV with LF line endings. Every record must have
/// performance set. Throws IoError on write failure.
void write_cohort_csv(const std::filesystem::path& path, const std::vector<StudentRecord>& cohort);

/// Read a cohort CSV, validating the header exactly against
/// kCohortCsvHeader and every field against the record invariants.
/// Throws SchemaError naming the offending column or line, IoError on I/O.
std::vector<StudentRecord> read_cohort_csv(const std::filesystem::path& path);

}  // namespace credscore
