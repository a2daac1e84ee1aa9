#include "credscore/regression.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <string>

#include "credscore/csv.hpp"
#include "credscore/errors.hpp"
#include "credscore/rng.hpp"

namespace credscore {

void TrainConfig::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ConfigError("alpha must be a positive finite learning rate");
    }
    if (iterations < 1) {
        throw ConfigError("iterations must be >= 1");
    }
    if (!(split_ratio > 0.0) || !(split_ratio < 1.0)) {
        throw ConfigError("split_ratio must lie strictly between 0 and 1");
    }
}

SplitDataset split(std::vector<StudentRecord> cohort, const TrainConfig& cfg) {
    cfg.validate();
    const std::size_t n = cohort.size();
    if (n < 2) {
        throw std::invalid_argument("split: cohort must contain at least 2 records");
    }
    Rng rng(cfg.shuffle_seed);
    for (std::size_t i = n - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.next_u64() % (i + 1));
        std::swap(cohort[i], cohort[j]);
    }
    const auto n_train =
        static_cast<std::size_t>(std::llround(cfg.split_ratio * static_cast<double>(n)));
    if (n_train == 0 || n_train >= n) {
        throw std::invalid_argument("split: cohort too small, ratio leaves an empty partition");
    }
    SplitDataset out;
    out.train.assign(cohort.begin(), cohort.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test.assign(cohort.begin() + static_cast<std::ptrdiff_t>(n_train), cohort.end());
    return out;
}

FeatureScaling fit_feature_scaling(const std::vector<StudentRecord>& records) {
    if (records.empty()) {
        throw std::invalid_argument("fit_feature_scaling: no records");
    }
    std::array<double, kNumFeatures> lo;
    std::array<double, kNumFeatures> hi;
    lo.fill(std::numeric_limits<double>::infinity());
    hi.fill(-std::numeric_limits<double>::infinity());
    for (const auto& rec : records) {
        const FeatureRow x = feature_vector(rec);
        for (int j = 0; j < kNumFeatures; ++j) {
            lo[j] = std::min(lo[j], x[j]);
            hi[j] = std::max(hi[j], x[j]);
        }
    }
    FeatureScaling sc;
    for (int j = 0; j < kNumFeatures; ++j) {
        if (!(hi[j] > lo[j])) {
            throw DegenerateFeatureError(std::string(kFeatureNames[j]));
        }
        sc.offset[j] = lo[j];
        sc.scale[j] = hi[j] - lo[j];
    }
    return sc;
}

std::vector<FeatureRow> scale_features(const std::vector<StudentRecord>& records,
                                       const FeatureScaling& sc) {
    std::vector<FeatureRow> rows;
    rows.reserve(records.size());
    for (const auto& rec : records) {
        const FeatureRow x = feature_vector(rec);
        FeatureRow z;
        for (int j = 0; j < kNumFeatures; ++j) z[j] = (x[j] - sc.offset[j]) / sc.scale[j];
        rows.push_back(z);
    }
    return rows;
}

std::vector<FeatureRow> unscale_features(const std::vector<FeatureRow>& rows,
                                         const FeatureScaling& sc) {
    std::vector<FeatureRow> out;
    out.reserve(rows.size());
    for (const auto& z : rows) {
        FeatureRow x;
        for (int j = 0; j < kNumFeatures; ++j) x[j] = z[j] * sc.scale[j] + sc.offset[j];
        out.push_back(x);
    }
    return out;
}

std::vector<double> targets(const std::vector<StudentRecord>& records) {
    std::vector<double> y;
    y.reserve(records.size());
    for (const auto& rec : records) {
        if (!rec.performance.has_value()) {
            throw std::invalid_argument("record has no performance value");
        }
        y.push_back(*rec.performance);
    }
    return y;
}

double hypothesis(const Theta& theta, const FeatureRow& x) {
    double h = theta[0];
    for (int j = 0; j < kNumFeatures; ++j) h += theta[j + 1] * x[j];
    return h;
}

namespace {

void check_shapes(const std::vector<FeatureRow>& X, const std::vector<double>& y) {
    if (X.size() != y.size() || X.empty()) {
        throw std::invalid_argument("cost/gradient: X and y must be non-empty and equal-length");
    }
}

}  // namespace

double cost(const Theta& theta, const std::vector<FeatureRow>& X, const std::vector<double>& y) {
    check_shapes(X, y);
    double sq = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        const double r = hypothesis(theta, X[i]) - y[i];
        sq += r * r;
    }
    return sq / (2.0 * static_cast<double>(X.size()));
}

Theta gradient(const Theta& theta, const std::vector<FeatureRow>& X, const std::vector<double>& y) {
    check_shapes(X, y);
    Theta g{};
    for (std::size_t i = 0; i < X.size(); ++i) {
        const double r = hypothesis(theta, X[i]) - y[i];
        g[0] += r;
        for (int j = 0; j < kNumFeatures; ++j) g[j + 1] += r * X[i][j];
    }
    const double inv_m = 1.0 / static_cast<double>(X.size());
    for (double& v : g) v *= inv_m;
    return g;
}

Theta to_normalized(const ModelParams& p) {
    Theta tn{};
    double t0 = p.theta[0];
    for (int j = 0; j < kNumFeatures; ++j) {
        tn[j + 1] = p.theta[j + 1] * p.scaling.scale[j];
        t0 += p.theta[j + 1] * p.scaling.offset[j];
    }
    tn[0] = t0;
    return tn;
}

ModelParams from_normalized(const Theta& tn, const FeatureScaling& sc) {
    ModelParams p;
    p.scaling = sc;
    double t0 = tn[0];
    for (int j = 0; j < kNumFeatures; ++j) {
        p.theta[j + 1] = tn[j + 1] / sc.scale[j];
        t0 -= tn[j + 1] * sc.offset[j] / sc.scale[j];
    }
    p.theta[0] = t0;
    return p;
}

TrainResult train(const SplitDataset& split, const TrainConfig& cfg) {
    cfg.validate();
    if (split.train.empty()) {
        throw std::invalid_argument("train: training partition is empty");
    }
    const FeatureScaling scaling = fit_feature_scaling(split.train);
    const std::vector<FeatureRow> X = scale_features(split.train, scaling);
    const std::vector<double> y = targets(split.train);
    const std::size_t m = X.size();
    const double inv_m = 1.0 / static_cast<double>(m);

    Theta theta{};  // zero-initialized by contract
    CostHistory history;
    history.reserve(cfg.iterations + 1);

    for (std::size_t t = 0; t < cfg.iterations; ++t) {
        // fused pass: residuals feed both the cost and the gradient sums
        Theta grad_sum{};
        double sq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const FeatureRow& x = X[i];
            double r = theta[0];
            for (int j = 0; j < kNumFeatures; ++j) r += theta[j + 1] * x[j];
            r -= y[i];
            sq += r * r;
            grad_sum[0] += r;
            for (int j = 0; j < kNumFeatures; ++j) grad_sum[j + 1] += r * x[j];
        }
        const double J = sq * 0.5 * inv_m;
        if (!std::isfinite(J)) {
            throw DivergenceError(t, cfg.alpha);
        }
        history.push_back({t, J});
        const double step = cfg.alpha * inv_m;
        for (int j = 0; j < 6; ++j) theta[j] -= step * grad_sum[j];
    }

    const double final_cost = cost(theta, X, y);
    if (!std::isfinite(final_cost)) {
        throw DivergenceError(cfg.iterations, cfg.alpha);
    }
    history.push_back({cfg.iterations, final_cost});
    return {from_normalized(theta, scaling), std::move(history)};
}

namespace {

// Solve A x = b (6x6) by Gaussian elimination with partial pivoting.
Theta gaussian_eliminate(std::array<std::array<double, 6>, 6> A, Theta b) {
    constexpr double kPivotTol = 1e-10;
    for (int col = 0; col < 6; ++col) {
        int piv = col;
        for (int r = col + 1; r < 6; ++r) {
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        }
        if (std::abs(A[piv][col]) < kPivotTol) {
            throw SingularSystemError("normal equations are singular: design matrix is rank-deficient");
        }
        std::swap(A[col], A[piv]);
        std::swap(b[col], b[piv]);
        for (int r = col + 1; r < 6; ++r) {
            const double f = A[r][col] / A[col][col];
            for (int k = col; k < 6; ++k) A[r][k] -= f * A[col][k];
            b[r] -= f * b[col];
        }
    }
    Theta x{};
    for (int r = 5; r >= 0; --r) {
        double acc = b[r];
        for (int k = r + 1; k < 6; ++k) acc -= A[r][k] * x[k];
        x[r] = acc / A[r][r];
    }
    return x;
}

}  // namespace

ModelParams solve_normal_equations(const SplitDataset& split) {
    const auto& recs = split.train;
    if (recs.size() < 6) {
        throw SingularSystemError("normal equations need at least 6 training records for full rank");
    }
    const std::vector<double> y = targets(recs);
    const std::size_t m = recs.size();
    const double inv_m = 1.0 / static_cast<double>(m);

    // z-score internally for conditioning; the solve route stays independent
    // of the min-max scaling used by gradient descent
    std::array<double, kNumFeatures> mu{};
    std::array<double, kNumFeatures> sd{};
    for (const auto& rec : recs) {
        const FeatureRow x = feature_vector(rec);
        for (int j = 0; j < kNumFeatures; ++j) mu[j] += x[j];
    }
    for (int j = 0; j < kNumFeatures; ++j) mu[j] *= inv_m;
    for (const auto& rec : recs) {
        const FeatureRow x = feature_vector(rec);
        for (int j = 0; j < kNumFeatures; ++j) sd[j] += (x[j] - mu[j]) * (x[j] - mu[j]);
    }
    for (int j = 0; j < kNumFeatures; ++j) {
        sd[j] = std::sqrt(sd[j] * inv_m);
        if (!(sd[j] > 0.0)) {
            throw SingularSystemError("normal equations are singular: feature '" +
                                      std::string(kFeatureNames[j]) + "' is constant");
        }
    }

    std::array<std::array<double, 6>, 6> A{};
    Theta b{};
    for (std::size_t i = 0; i < m; ++i) {
        const FeatureRow x = feature_vector(recs[i]);
        std::array<double, 6> a;
        a[0] = 1.0;
        for (int j = 0; j < kNumFeatures; ++j) a[j + 1] = (x[j] - mu[j]) / sd[j];
        for (int r = 0; r < 6; ++r) {
            for (int c = 0; c < 6; ++c) A[r][c] += a[r] * a[c];
            b[r] += a[r] * y[i];
        }
    }
    for (int r = 0; r < 6; ++r) {
        for (int c = 0; c < 6; ++c) A[r][c] *= inv_m;
        b[r] *= inv_m;
    }

    const Theta t = gaussian_eliminate(A, b);

    ModelParams p;
    double raw0 = t[0];
    for (int j = 0; j < kNumFeatures; ++j) {
        p.theta[j + 1] = t[j + 1] / sd[j];
        raw0 -= t[j + 1] * mu[j] / sd[j];
    }
    p.theta[0] = raw0;
    p.scaling = fit_feature_scaling(recs);
    return p;
}

Evaluation evaluate(const ModelParams& params, const std::vector<StudentRecord>& records) {
    if (records.empty()) {
        throw std::invalid_argument("evaluate: no records");
    }
    const std::vector<double> y = targets(records);
    Evaluation ev;
    ev.predictions.reserve(records.size());
    double sq = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const double pred = hypothesis(params.theta, feature_vector(records[i]));
        ev.predictions.push_back(pred);
        const double r = pred - y[i];
        sq += r * r;
    }
    ev.cost = sq / (2.0 * static_cast<double>(records.size()));
    return ev;
}

// ---------------------------------------------------------------------------
// artifacts
// ---------------------------------------------------------------------------

void write_params_file(const std::filesystem::path& path, const ModelParams& params) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    for (int j = 0; j < 6; ++j) {
        out << "theta" << j << '=' << format_double(params.theta[j]) << '\n';
    }
    for (int j = 0; j < kNumFeatures; ++j) {
        out << "norm_offset" << (j + 1) << '=' << format_double(params.scaling.offset[j]) << '\n';
    }
    for (int j = 0; j < kNumFeatures; ++j) {
        out << "norm_scale" << (j + 1) << '=' << format_double(params.scaling.scale[j]) << '\n';
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

ModelParams read_params_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");

    std::map<std::string, double> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw SchemaError("params file line " + std::to_string(line_no) +
                              ": expected key=value, got '" + line + "'");
        }
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
        if (ec != std::errc{} || ptr != val.data() + val.size() || !std::isfinite(v)) {
            throw SchemaError("params file line " + std::to_string(line_no) +
                              ": invalid value for '" + key + "'");
        }
        kv[key] = v;
    }

    auto require = [&](const std::string& key) {
        const auto it = kv.find(key);
        if (it == kv.end()) throw SchemaError("params file: missing key '" + key + "'");
        return it->second;
    };

    ModelParams p;
    for (int j = 0; j < 6; ++j) p.theta[j] = require("theta" + std::to_string(j));
    for (int j = 0; j < kNumFeatures; ++j) {
        p.scaling.offset[j] = require("norm_offset" + std::to_string(j + 1));
        p.scaling.scale[j] = require("norm_scale" + std::to_string(j + 1));
        if (!(p.scaling.scale[j] > 0.0)) {
            throw SchemaError("params file: norm_scale" + std::to_string(j + 1) +
                              " must be positive");
        }
    }
    if (kv.size() != 16) {
        throw SchemaError("params file: unexpected extra keys present");
    }
    return p;
}

void write_cost_history_csv(const std::filesystem::path& path, const CostHistory& history) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << "iteration,cost\n";
    for (const auto& pt : history) {
        out << pt.iteration << ',' << format_double(pt.cost) << '\n';
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace credscore
