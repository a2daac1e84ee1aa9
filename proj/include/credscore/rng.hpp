#pragma once

#include <array>
#include <cstdint>

namespace credscore {

/// Deterministic seeded random source. The base generator is xoshiro256++
/// seeded through splitmix64, so a given seed yields the same sample
/// sequence on every platform. One instance per logical stream; instances
/// are single-owner and must not be shared across threads.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Next raw 64-bit word from the base generator.
    std::uint64_t next_u64();

    /// Uniform variate in [0, 1).
    double uniform();

    /// Gaussian variate via the Marsaglia polar transform.
    /// sigma must be >= 0; sigma == 0 returns exactly mu.
    double gaussian(double mu, double sigma);

    /// Poisson draw. Inversion by sequential search for mu <= 30,
    /// rounded Gaussian approximation (clamped at 0) above.
    /// mu must be > 0.
    std::int64_t poisson(double mu);

    /// Count of successes in n Bernoulli(p) trials, in [0, n].
    /// n must be >= 1 and p in [0, 1].
    std::int64_t binomial(std::int64_t n, double p);

private:
    std::array<std::uint64_t, 4> state_;
};

}  // namespace credscore
