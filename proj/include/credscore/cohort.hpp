#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "credscore/rng.hpp"

namespace credscore {

inline constexpr int kNumFeatures = 5;

/// Feature names in column order: attendance, attentiveness, homework,
/// understanding, prev_performance.
inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "attendance", "attentiveness", "homework", "understanding", "prev_performance"};

/// One simulated student: five activity features plus the generated
/// performance target (unset until synthesized).
struct StudentRecord {
    double attendance = 0.0;        // percent, [0,100]
    double attentiveness = 0.0;     // percent, [0,100]
    double homework = 0.0;          // percent, [0,100]
    int understanding = 1;          // rating, {1..10}
    double prev_performance = 0.0;  // score, [0,100]
    std::optional<double> performance;

    bool operator==(const StudentRecord&) const = default;
};

using FeatureRow = std::array<double, kNumFeatures>;

inline FeatureRow feature_vector(const StudentRecord& rec) {
    return {rec.attendance, rec.attentiveness, rec.homework,
            static_cast<double>(rec.understanding), rec.prev_performance};
}

struct SimulationConfig {
    std::size_t n_students = 3000;
    std::uint64_t seed = 42;

    double attendance_mean_pct = 70.0;
    double attendance_sd_pct = 3.0;
    double attentiveness_mean_pct = 60.0;
    double attentiveness_sd_pct = 3.0;
    double homework_mean_pct = 70.0;
    double homework_sd_pct = 10.0;

    // relative weights for the ten rating categories {1..10}
    std::array<double, 10> understanding_weights = {1, 1, 1, 1, 1, 1, 1, 1, 1, 1};

    double prev_score_mean = 70.0;
    double prev_score_sd = 3.0;

    // generator weights: weights[0] constant term, weights[1..5] per feature
    std::array<double, 6> weights = {0.20, 0.30, 0.05, 0.40, 0.10, 0.15};
    double noise_sd = 0.01;  // score units

    /// Throws ConfigError on violated invariants.
    void validate() const;
};

/// Draw the five activity features for one student; performance stays unset.
StudentRecord sample_student(Rng& rng, const SimulationConfig& cfg);

/// Set performance = w0 + sum_j w_j * x_j + Gaussian(0, noise_sd) noise.
/// The result is intentionally not clamped.
StudentRecord synthesize_performance(StudentRecord rec, const SimulationConfig& cfg, Rng& rng);

/// Generate a fully populated cohort; deterministic for a fixed cfg.seed.
std::vector<StudentRecord> generate_cohort(const SimulationConfig& cfg);

}  // namespace credscore
