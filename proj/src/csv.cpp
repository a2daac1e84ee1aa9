#include "credscore/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "credscore/errors.hpp"

namespace credscore {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_field_double(const std::string& s, std::size_t line_no, std::string_view column) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
        throw SchemaError("cohort CSV line " + std::to_string(line_no) + ": invalid value '" + s +
                          "' in column '" + std::string(column) + "'");
    }
    return v;
}

void check_range(double v, double lo, double hi, std::size_t line_no, std::string_view column) {
    if (v < lo || v > hi) {
        throw SchemaError("cohort CSV line " + std::to_string(line_no) + ": column '" +
                          std::string(column) + "' value " + format_double(v) + " outside [" +
                          format_double(lo) + "," + format_double(hi) + "]");
    }
}

}  // namespace

std::string format_double(double v) {
    std::array<char, 32> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

void write_cohort_csv(const std::filesystem::path& path, const std::vector<StudentRecord>& cohort) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << kCohortCsvHeader << '\n';
    for (const auto& rec : cohort) {
        if (!rec.performance.has_value()) {
            throw std::invalid_argument("write_cohort_csv: record has no performance value");
        }
        out << format_double(rec.attendance) << ',' << format_double(rec.attentiveness) << ','
            << format_double(rec.homework) << ',' << rec.understanding << ','
            << format_double(rec.prev_performance) << ',' << format_double(*rec.performance)
            << '\n';
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<StudentRecord> read_cohort_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");

    std::string line;
    if (!std::getline(in, line)) {
        throw SchemaError("cohort CSV '" + path.string() + "': missing header line");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const std::vector<std::string> header = split_fields(line);
    const std::array<std::string_view, 6> expected = {
        kFeatureNames[0], kFeatureNames[1], kFeatureNames[2],
        kFeatureNames[3], kFeatureNames[4], "performance"};
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i >= header.size()) {
            throw SchemaError("cohort CSV: missing column '" + std::string(expected[i]) + "'");
        }
        if (header[i] != expected[i]) {
            throw SchemaError("cohort CSV: expected column '" + std::string(expected[i]) +
                              "' at position " + std::to_string(i + 1) + ", got '" + header[i] +
                              "'");
        }
    }
    if (header.size() > expected.size()) {
        throw SchemaError("cohort CSV: unexpected extra column '" + header[expected.size()] + "'");
    }

    std::vector<StudentRecord> cohort;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != 6) {
            throw SchemaError("cohort CSV line " + std::to_string(line_no) + ": expected 6 fields, got " +
                              std::to_string(fields.size()));
        }
        StudentRecord rec;
        rec.attendance = parse_field_double(fields[0], line_no, expected[0]);
        rec.attentiveness = parse_field_double(fields[1], line_no, expected[1]);
        rec.homework = parse_field_double(fields[2], line_no, expected[2]);
        const double und = parse_field_double(fields[3], line_no, expected[3]);
        rec.prev_performance = parse_field_double(fields[4], line_no, expected[4]);
        rec.performance = parse_field_double(fields[5], line_no, expected[5]);

        check_range(rec.attendance, 0, 100, line_no, expected[0]);
        check_range(rec.attentiveness, 0, 100, line_no, expected[1]);
        check_range(rec.homework, 0, 100, line_no, expected[2]);
        check_range(und, 1, 10, line_no, expected[3]);
        if (und != std::floor(und)) {
            throw SchemaError("cohort CSV line " + std::to_string(line_no) +
                              ": column 'understanding' must be an integer");
        }
        rec.understanding = static_cast<int>(und);
        check_range(rec.prev_performance, 0, 100, line_no, expected[4]);
        cohort.push_back(rec);
    }
    return cohort;
}

}  // namespace credscore
