#include "credscore/credit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace credscore {

double credit_score(const ModelParams& params, const StudentRecord& rec) {
    return hypothesis(params.theta, feature_vector(rec));
}

std::vector<ImportanceEntry> rank_importance(const ModelParams& params) {
    const Theta tn = to_normalized(params);
    double total = 0.0;
    for (int j = 0; j < kNumFeatures; ++j) total += std::abs(tn[j + 1]);

    std::vector<ImportanceEntry> entries;
    entries.reserve(kNumFeatures);
    for (int j = 0; j < kNumFeatures; ++j) {
        const double w = tn[j + 1];
        entries.push_back({kFeatureNames[j], w, total > 0.0 ? std::abs(w) / total : 0.0});
    }
    // stable sort keeps column order on ties
    std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return std::abs(a.weight) > std::abs(b.weight);
    });
    return entries;
}

ClassCreditSeries class_credit_series(const ModelParams& params,
                                      const std::vector<StudentRecord>& per_class_records) {
    ClassCreditSeries series;
    series.scores.reserve(per_class_records.size());
    series.running_mean.reserve(per_class_records.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < per_class_records.size(); ++i) {
        const double s = credit_score(params, per_class_records[i]);
        series.scores.push_back(s);
        sum += s;
        series.running_mean.push_back(sum / static_cast<double>(i + 1));
    }
    return series;
}

CreditScoreReport build_report(const ModelParams& params,
                               const std::vector<StudentRecord>& cohort) {
    CreditScoreReport report;
    report.ranking = rank_importance(params);
    report.scores.reserve(cohort.size());
    for (const auto& rec : cohort) report.scores.push_back(credit_score(params, rec));

    if (report.scores.empty()) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        report.mean = report.min = report.max = nan;
        return report;
    }
    double sum = 0.0;
    report.min = report.scores.front();
    report.max = report.scores.front();
    for (double s : report.scores) {
        sum += s;
        report.min = std::min(report.min, s);
        report.max = std::max(report.max, s);
    }
    report.mean = sum / static_cast<double>(report.scores.size());
    return report;
}

}  // namespace credscore
