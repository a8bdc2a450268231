#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dagm {

/// Deterministic random source. Draws are derived from raw mt19937_64 output
/// so that sequences do not depend on standard-library distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
    }

    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(below(static_cast<std::uint64_t>(n)));
    }

    /// Geometric count on {0,1,2,...} with P(X=k) = (1-p) p^k, mean p/(1-p).
    int geometric(double p) {
        if (p <= 0.0) return 0;
        double u = uniform();
        while (u <= 0.0) u = uniform();
        return static_cast<int>(std::floor(std::log(u) / std::log(p)));
    }

private:
    std::mt19937_64 engine_;
};

} // namespace dagm
