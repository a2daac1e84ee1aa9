#include "credscore/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace credscore {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform() {
    // top 53 bits -> [0,1) with full double resolution
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gaussian(double mu, double sigma) {
    if (!(sigma >= 0.0)) {
        throw std::invalid_argument("gaussian: sigma must be >= 0");
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    // second variate of the pair is discarded; keeps draw accounting simple
    return mu + sigma * (u * std::sqrt(-2.0 * std::log(s) / s));
}

std::int64_t Rng::poisson(double mu) {
    if (!(mu > 0.0)) {
        throw std::invalid_argument("poisson: mu must be > 0");
    }
    if (mu > 30.0) {
        const auto k = std::llround(gaussian(mu, std::sqrt(mu)));
        return k < 0 ? 0 : k;
    }
    const double u = uniform();
    double pmf = std::exp(-mu);
    double cum = pmf;
    std::int64_t k = 0;
    // cap guards against cum saturating just below u in the extreme tail
    const auto k_max = static_cast<std::int64_t>(mu + 15.0 * std::sqrt(mu) + 20.0);
    while (u > cum && k < k_max) {
        ++k;
        pmf *= mu / static_cast<double>(k);
        cum += pmf;
    }
    return k;
}

std::int64_t Rng::binomial(std::int64_t n, double p) {
    if (n < 1) {
        throw std::invalid_argument("binomial: n must be >= 1");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("binomial: p must lie in [0, 1]");
    }
    if (p == 0.0) return 0;
    if (p == 1.0) return n;

    const bool flipped = p > 0.5;
    const double q = flipped ? 1.0 - p : p;
    const double nq = static_cast<double>(n) * q;

    std::int64_t k;
    if (nq <= 30.0) {
        // inversion with the pmf recurrence; pmf(0) representable since n*q <= 30
        const double u = uniform();
        double pmf = std::exp(static_cast<double>(n) * std::log1p(-q));
        double cum = pmf;
        const double odds = q / (1.0 - q);
        k = 0;
        while (u > cum && k < n) {
            pmf *= (static_cast<double>(n - k) / static_cast<double>(k + 1)) * odds;
            ++k;
            cum += pmf;
        }
    } else {
        const auto g = std::llround(gaussian(nq, std::sqrt(nq * (1.0 - q))));
        k = g < 0 ? 0 : (g > n ? n : g);
    }
    return flipped ? n - k : k;
}

}  // namespace credscore
