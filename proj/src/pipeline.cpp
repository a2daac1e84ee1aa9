#include "credscore/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "credscore/credit.hpp"
#include "credscore/csv.hpp"
#include "credscore/errors.hpp"
#include "credscore/rng.hpp"
#include "credscore/stats.hpp"

namespace credscore {

namespace {

std::string fmt(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

std::string fmt_sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void ensure_out_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

std::string theta_row(std::string_view label, const Theta& t) {
    std::string row{label};
    row.resize(18, ' ');
    for (double v : t) {
        std::string cell = fmt(v, 6);
        cell.insert(0, cell.size() < 12 ? 12 - cell.size() : 0, ' ');
        row += cell;
    }
    return row;
}

/// Max relative error between the analytic gradient and central finite
/// differences of the cost, probed at deterministic pseudo-random points.
double gradient_probe(const std::vector<FeatureRow>& X, const std::vector<double>& y) {
    Rng rng(0x5eedf00dULL);
    double worst = 0.0;
    for (int point = 0; point < 3; ++point) {
        Theta theta;
        for (double& t : theta) t = 4.0 * rng.uniform() - 2.0;
        const Theta analytic = gradient(theta, X, y);
        for (int j = 0; j < 6; ++j) {
            Theta lo = theta, hi = theta;
            lo[j] -= kGradCheckStep;
            hi[j] += kGradCheckStep;
            const double fd = (cost(hi, X, y) - cost(lo, X, y)) / (2.0 * kGradCheckStep);
            const double denom = std::max({std::abs(analytic[j]), std::abs(fd), 1e-12});
            worst = std::max(worst, std::abs(fd - analytic[j]) / denom);
        }
    }
    return worst;
}

}  // namespace

void cmd_simulate(const PipelineConfig& cfg) {
    ensure_out_dir(cfg.out_dir);
    const std::vector<StudentRecord> cohort = generate_cohort(cfg.sim);
    const auto path = cfg.out_dir / kCohortFile;
    write_cohort_csv(path, cohort);

    std::vector<double> perf;
    std::array<std::vector<double>, kNumFeatures> cols;
    for (const auto& rec : cohort) {
        const FeatureRow x = feature_vector(rec);
        for (int j = 0; j < kNumFeatures; ++j) cols[j].push_back(x[j]);
        perf.push_back(*rec.performance);
    }

    std::cout << "simulated " << cohort.size() << " students -> " << path.string() << "\n";
    for (int j = 0; j < kNumFeatures; ++j) {
        std::cout << "  " << kFeatureNames[j] << ": mean=" << fmt(stats::mean(cols[j]), 4)
                  << " sd=" << fmt(stats::stddev(cols[j]), 4) << "\n";
    }
    std::cout << "  performance: mean=" << fmt(stats::mean(perf), 4)
              << " sd=" << fmt(stats::stddev(perf), 4) << "\n";
}

void cmd_train(const PipelineConfig& cfg, const std::filesystem::path& cohort_path) {
    ensure_out_dir(cfg.out_dir);
    const std::vector<StudentRecord> cohort = read_cohort_csv(cohort_path);
    const SplitDataset sp = split(cohort, cfg.train);

    const TrainResult fit = train(sp, cfg.train);
    write_params_file(cfg.out_dir / kParamsFile, fit.params);
    write_cost_history_csv(cfg.out_dir / kCostHistoryFile, fit.history);

    // refit on the held-out partition, mirroring the fitted-testing row
    const SplitDataset test_as_train{sp.test, {}};
    const TrainResult refit = train(test_as_train, cfg.train);

    Theta injected{};
    for (int j = 0; j < 6; ++j) injected[j] = cfg.sim.weights[j];

    std::string table;
    {
        std::string head{"parameter"};
        head.resize(18, ' ');
        for (int j = 0; j < 6; ++j) {
            std::string cell = "theta" + std::to_string(j);
            cell.insert(0, cell.size() < 12 ? 12 - cell.size() : 0, ' ');
            head += cell;
        }
        table += head + "\n";
    }
    table += theta_row("injected", injected) + "\n";
    table += theta_row("fitted_training", fit.params.theta) + "\n";
    table += theta_row("fitted_testing", refit.params.theta) + "\n";

    auto out = open_out(cfg.out_dir / kComparisonFile);
    out << table;
    if (!out) throw IoError("write failed for '" + (cfg.out_dir / kComparisonFile).string() + "'");

    std::cout << "trained on " << sp.train.size() << " records, held out " << sp.test.size()
              << " (alpha=" << format_double(cfg.train.alpha)
              << ", iterations=" << cfg.train.iterations << ")\n"
              << "final training cost: " << format_double(fit.history.back().cost) << "\n"
              << table;
}

bool cmd_verify(const PipelineConfig& cfg, const std::filesystem::path& cohort_path,
                const std::filesystem::path& params_path) {
    ensure_out_dir(cfg.out_dir);
    const std::vector<StudentRecord> cohort = read_cohort_csv(cohort_path);
    const SplitDataset sp = split(cohort, cfg.train);

    const ModelParams fitted = read_params_file(params_path);
    const ModelParams oracle = solve_normal_equations(sp);

    double max_dev = 0.0;
    std::vector<int> offending;
    for (int j = 0; j < 6; ++j) {
        const double dev = std::abs(fitted.theta[j] - oracle.theta[j]);
        max_dev = std::max(max_dev, dev);
        if (dev > kOracleTolerance) offending.push_back(j);
    }
    const bool oracle_pass = offending.empty();

    const std::vector<FeatureRow> X = scale_features(sp.train, fit_feature_scaling(sp.train));
    const std::vector<double> y = targets(sp.train);
    const double grad_err = gradient_probe(X, y);
    const bool grad_pass = grad_err <= kGradCheckTolerance;

    std::string report;
    report += "verification report\n";
    report += "cohort: " + cohort_path.string() + " (" + std::to_string(cohort.size()) +
              " records; train=" + std::to_string(sp.train.size()) +
              ", test=" + std::to_string(sp.test.size()) + ")\n";
    report += "params: " + params_path.string() + "\n\n";
    report += "component        fitted           oracle           |diff|\n";
    for (int j = 0; j < 6; ++j) {
        std::string line = "theta" + std::to_string(j);
        line.resize(17, ' ');
        std::string a = fmt(fitted.theta[j], 10);
        a.resize(17, ' ');
        std::string b = fmt(oracle.theta[j], 10);
        b.resize(17, ' ');
        report += line + a + b + fmt_sci(std::abs(fitted.theta[j] - oracle.theta[j])) + "\n";
    }
    report += "\nmax |theta_fitted - theta_oracle| = " + fmt_sci(max_dev) + " (tolerance " +
              fmt_sci(kOracleTolerance) + "): " + (oracle_pass ? "PASS" : "FAIL") + "\n";
    if (!oracle_pass) {
        report += "offending components:";
        for (int j : offending) report += " theta" + std::to_string(j);
        report += "\n";
    }
    report += "gradient check: max relative error " + fmt_sci(grad_err) + " (tolerance " +
              fmt_sci(kGradCheckTolerance) + ", step " + fmt_sci(kGradCheckStep) +
              "): " + (grad_pass ? "PASS" : "FAIL") + "\n";
    const bool pass = oracle_pass && grad_pass;
    report += "overall: " + std::string(pass ? "PASS" : "FAIL") + "\n";

    auto out = open_out(cfg.out_dir / kVerifyReportFile);
    out << report;
    if (!out) throw IoError("write failed for '" + (cfg.out_dir / kVerifyReportFile).string() + "'");
    std::cout << report;
    return pass;
}

void cmd_score(const std::filesystem::path& out_dir, const std::filesystem::path& cohort_path,
               const std::filesystem::path& params_path) {
    ensure_out_dir(out_dir);
    const std::vector<StudentRecord> cohort = read_cohort_csv(cohort_path);
    const ModelParams params = read_params_file(params_path);
    const CreditScoreReport report = build_report(params, cohort);

    {
        auto out = open_out(out_dir / kScoresFile);
        out << "student_id,credit_score\n";
        for (std::size_t i = 0; i < report.scores.size(); ++i) {
            out << i << ',' << format_double(report.scores[i]) << '\n';
        }
        if (!out) throw IoError("write failed for '" + (out_dir / kScoresFile).string() + "'");
    }
    {
        auto out = open_out(out_dir / kImportanceFile);
        out << "feature,weight,share\n";
        for (const auto& entry : report.ranking) {
            out << entry.feature << ',' << format_double(entry.weight) << ','
                << format_double(entry.share) << '\n';
        }
        if (!out) throw IoError("write failed for '" + (out_dir / kImportanceFile).string() + "'");
    }

    std::string summary;
    summary += "credit score summary\n";
    summary += "students: " + std::to_string(report.scores.size()) + "\n";
    if (report.scores.empty()) {
        summary += "no records in cohort; score CSV is empty\n";
    } else {
        summary += "mean=" + fmt(report.mean, 4) + " min=" + fmt(report.min, 4) +
                   " max=" + fmt(report.max, 4) + "\n";
    }
    summary += "\nimportance ranking (normalized-space coefficients)\n";
    summary += "rank  feature            weight        share\n";
    for (std::size_t i = 0; i < report.ranking.size(); ++i) {
        const auto& entry = report.ranking[i];
        std::string line = std::to_string(i + 1);
        line.resize(6, ' ');
        std::string name{entry.feature};
        name.resize(19, ' ');
        std::string w = fmt(entry.weight, 6);
        w.resize(14, ' ');
        summary += line + name + w + fmt(entry.share, 6) + "\n";
    }

    auto out = open_out(out_dir / kScoreSummaryFile);
    out << summary;
    if (!out) throw IoError("write failed for '" + (out_dir / kScoreSummaryFile).string() + "'");
    std::cout << summary;
}

int run_all(const PipelineConfig& cfg) {
    const auto enabled = [&cfg](std::string_view stage) {
        return std::find(cfg.stages.begin(), cfg.stages.end(), stage) != cfg.stages.end();
    };
    const auto cohort_path = cfg.out_dir / kCohortFile;
    const auto params_path = cfg.out_dir / kParamsFile;

    if (enabled("simulate")) cmd_simulate(cfg);
    if (enabled("train")) cmd_train(cfg, cohort_path);
    if (enabled("verify")) {
        if (!cmd_verify(cfg, cohort_path, params_path)) return 4;
    }
    if (enabled("score")) cmd_score(cfg.out_dir, cohort_path, params_path);
    return 0;
}

}  // namespace credscore
