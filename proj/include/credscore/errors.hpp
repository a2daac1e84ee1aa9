#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace credscore {

// Error categories; the CLI maps them onto exit codes
// (config=2, schema=3, numeric=4, io=5).

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DivergenceError : public NumericError {
public:
    DivergenceError(std::size_t iteration, double alpha)
        : NumericError("gradient descent diverged: non-finite cost at iteration " +
                       std::to_string(iteration) + " (alpha=" + std::to_string(alpha) + ")"),
          iteration_(iteration),
          alpha_(alpha) {}

    std::size_t iteration() const noexcept { return iteration_; }
    double alpha() const noexcept { return alpha_; }

private:
    std::size_t iteration_;
    double alpha_;
};

class SingularSystemError : public NumericError {
public:
    using NumericError::NumericError;
};

class DegenerateFeatureError : public NumericError {
public:
    explicit DegenerateFeatureError(const std::string& column)
        : NumericError("degenerate feature: column '" + column + "' has zero variance"),
          column_(column) {}

    const std::string& column() const noexcept { return column_; }

private:
    std::string column_;
};

}  // namespace credscore
