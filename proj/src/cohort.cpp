#include "credscore/cohort.hpp"

#include <algorithm>
#include <cmath>

#include "credscore/errors.hpp"

namespace credscore {

namespace {

double clamp_pct(double v) {
    return std::clamp(v, 0.0, 100.0);
}

int sample_category(Rng& rng, const std::array<double, 10>& weights, double total) {
    const double u = rng.uniform() * total;
    double cum = 0.0;
    for (int k = 0; k < 10; ++k) {
        cum += weights[k];
        if (u < cum) return k + 1;
    }
    return 10;  // u landed on accumulated rounding at the top end
}

}  // namespace

void SimulationConfig::validate() const {
    if (n_students < 2) {
        throw ConfigError("n_students must be >= 2 (split needs both partitions non-empty)");
    }
    if (!(attendance_sd_pct >= 0.0) || !(attentiveness_sd_pct >= 0.0) ||
        !(homework_sd_pct >= 0.0) || !(prev_score_sd >= 0.0)) {
        throw ConfigError("standard deviations must be >= 0");
    }
    if (!(noise_sd >= 0.0)) {
        throw ConfigError("noise_sd must be >= 0");
    }
    double weight_sum = 0.0;
    for (double w : understanding_weights) {
        if (!(w >= 0.0)) throw ConfigError("understanding_weights must be non-negative");
        weight_sum += w;
    }
    if (!(weight_sum > 0.0)) {
        throw ConfigError("understanding_weights must have a positive sum");
    }
    for (double c : weights) {
        if (!std::isfinite(c)) throw ConfigError("generator weights must be finite");
    }
}

StudentRecord sample_student(Rng& rng, const SimulationConfig& cfg) {
    cfg.validate();
    double weight_sum = 0.0;
    for (double w : cfg.understanding_weights) weight_sum += w;

    StudentRecord rec;
    rec.attendance = clamp_pct(rng.gaussian(cfg.attendance_mean_pct, cfg.attendance_sd_pct));
    rec.attentiveness = clamp_pct(rng.gaussian(cfg.attentiveness_mean_pct, cfg.attentiveness_sd_pct));
    rec.homework = clamp_pct(rng.gaussian(cfg.homework_mean_pct, cfg.homework_sd_pct));
    rec.understanding = sample_category(rng, cfg.understanding_weights, weight_sum);
    rec.prev_performance = clamp_pct(rng.gaussian(cfg.prev_score_mean, cfg.prev_score_sd));
    return rec;
}

StudentRecord synthesize_performance(StudentRecord rec, const SimulationConfig& cfg, Rng& rng) {
    const FeatureRow x = feature_vector(rec);
    double perf = cfg.weights[0];
    for (int j = 0; j < kNumFeatures; ++j) perf += cfg.weights[j + 1] * x[j];
    perf += rng.gaussian(0.0, cfg.noise_sd);
    rec.performance = perf;
    return rec;
}

std::vector<StudentRecord> generate_cohort(const SimulationConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    std::vector<StudentRecord> cohort;
    cohort.reserve(cfg.n_students);
    for (std::size_t i = 0; i < cfg.n_students; ++i) {
        cohort.push_back(synthesize_performance(sample_student(rng, cfg), cfg, rng));
    }
    return cohort;
}

}  // namespace credscore
