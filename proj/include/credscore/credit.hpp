#pragma once

#include <string_view>
#include <vector>

#include "credscore/cohort.hpp"
#include "credscore/regression.hpp"

namespace credscore {

/// One ranked feature: normalized-space coefficient plus its share of the
/// total absolute coefficient mass.
struct ImportanceEntry {
    std::string_view feature;
    double weight;  // normalized-space coefficient (signed)
    double share;   // |weight| / sum of |weights|
};

struct CreditScoreReport {
    std::vector<double> scores;
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::vector<ImportanceEntry> ranking;
};

/// Credit score of one student: the fitted affine model evaluated on the
/// student's raw features. Same functional form as hypothesis().
double credit_score(const ModelParams& params, const StudentRecord& rec);

/// Features ordered by descending |normalized-space coefficient|; ties keep
/// column order. Raw-space magnitudes are never compared (units differ).
std::vector<ImportanceEntry> rank_importance(const ModelParams& params);

struct ClassCreditSeries {
    std::vector<double> scores;
    std::vector<double> running_mean;
};

/// Per-class-session credit scores with a running mean; records are assumed
/// ordered by session. Empty input yields an empty series.
ClassCreditSeries class_credit_series(const ModelParams& params,
                                      const std::vector<StudentRecord>& per_class_records);

/// Cohort-level report: per-student scores, summary stats and the
/// importance ranking. mean/min/max are NaN for an empty cohort.
CreditScoreReport build_report(const ModelParams& params,
                               const std::vector<StudentRecord>& cohort);

}  // namespace credscore
