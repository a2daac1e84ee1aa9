#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "credscore/cohort.hpp"

namespace credscore {

using Theta = std::array<double, 6>;  // [0] intercept, [1..5] per feature

struct TrainConfig {
    double alpha = 0.05;
    std::size_t iterations = 50000;
    double split_ratio = 0.8;  // train fraction
    std::uint64_t shuffle_seed = 7;

    void validate() const;  // throws ConfigError
};

/// Per-feature min-max mapping fitted on training data:
/// z = (x - offset) / scale with scale = max - min > 0.
struct FeatureScaling {
    std::array<double, kNumFeatures> offset{};
    std::array<double, kNumFeatures> scale{};

    bool operator==(const FeatureScaling&) const = default;
};

/// Fitted model: raw-space coefficients plus the normalization metadata
/// the optimizer ran under (needed for normalized-space reporting).
struct ModelParams {
    Theta theta{};  // raw feature units
    FeatureScaling scaling;

    bool operator==(const ModelParams&) const = default;
};

struct CostPoint {
    std::size_t iteration;
    double cost;
};
using CostHistory = std::vector<CostPoint>;

struct SplitDataset {
    std::vector<StudentRecord> train;
    std::vector<StudentRecord> test;
};

// ---------------------------------------------------------------------------
// dataset handling
// ---------------------------------------------------------------------------

/// Seeded Fisher-Yates shuffle, then partition with
/// |train| = round(split_ratio * n). Throws on cohorts too small to leave
/// both partitions non-empty.
SplitDataset split(std::vector<StudentRecord> cohort, const TrainConfig& cfg);

/// Min-max statistics from the given records. Throws DegenerateFeatureError
/// (naming the column) when a feature has zero range.
FeatureScaling fit_feature_scaling(const std::vector<StudentRecord>& records);

std::vector<FeatureRow> scale_features(const std::vector<StudentRecord>& records,
                                       const FeatureScaling& scaling);
std::vector<FeatureRow> unscale_features(const std::vector<FeatureRow>& rows,
                                         const FeatureScaling& scaling);

/// Target vector; throws if any record lacks a performance value.
std::vector<double> targets(const std::vector<StudentRecord>& records);

// ---------------------------------------------------------------------------
// model arithmetic
// ---------------------------------------------------------------------------

/// Affine predictor theta0 + sum_j theta_j * x_j.
double hypothesis(const Theta& theta, const FeatureRow& x);

/// Least-squares cost (1/2m) * sum (H(x_i) - y_i)^2.
double cost(const Theta& theta, const std::vector<FeatureRow>& X, const std::vector<double>& y);

/// Analytic cost gradient: component j is (1/m) * sum (H(x_i) - y_i) * x_ij
/// with x_i0 == 1.
Theta gradient(const Theta& theta, const std::vector<FeatureRow>& X, const std::vector<double>& y);

/// Coefficients for the normalized feature space the optimizer used.
Theta to_normalized(const ModelParams& params);
/// Inverse of to_normalized: raw-space params from normalized coefficients.
ModelParams from_normalized(const Theta& theta_norm, const FeatureScaling& scaling);

// ---------------------------------------------------------------------------
// fitting
// ---------------------------------------------------------------------------

struct TrainResult {
    ModelParams params;
    CostHistory history;  // one entry per iteration, indices 0..iterations
};

/// Full-batch gradient descent from theta = 0 on the min-max-normalized
/// training partition. Throws DivergenceError when the cost goes non-finite.
TrainResult train(const SplitDataset& split, const TrainConfig& cfg);

/// Closed-form least-squares minimizer via the normal equations (Gaussian
/// elimination with partial pivoting), used as the independent oracle for
/// train(). Throws SingularSystemError on rank-deficient designs.
ModelParams solve_normal_equations(const SplitDataset& split);

struct Evaluation {
    double cost;
    std::vector<double> predictions;
};

/// Cost and per-record predictions of a fitted model on raw records.
Evaluation evaluate(const ModelParams& params, const std::vector<StudentRecord>& records);

// ---------------------------------------------------------------------------
// artifacts
// ---------------------------------------------------------------------------

/// Plain-text key=value parameter file (theta0..theta5 in raw units plus
/// norm_offset1..5 / norm_scale1..5). Values round-trip exactly.
void write_params_file(const std::filesystem::path& path, const ModelParams& params);
ModelParams read_params_file(const std::filesystem::path& path);

/// Two-column CSV "iteration,cost" for external plotting.
void write_cost_history_csv(const std::filesystem::path& path, const CostHistory& history);

}  // namespace credscore
