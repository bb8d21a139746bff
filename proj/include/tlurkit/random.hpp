#pragma once

#include <cstdint>
#include <random>

#include "tlurkit/linops.hpp"

namespace tlurkit {

/// Seeded generator with a fixed algorithm so results reproduce across
/// platforms: std::mt19937_64 for raw bits (its output sequence is fully
/// specified by the standard), 53-bit uniform doubles, and Box-Muller normals.
/// The std distributions are avoided because their algorithms are
/// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1].
    double uniform_open0() { return 1.0 - uniform(); }

    double normal();

    /// Exp(1) variate.
    double exponential();

    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Derives an independent stream seed (SplitMix64 finaliser).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Haar-random unit vector in C^dim.
ComplexVector haar_pure_state(std::size_t dim, Rng& rng);

} // namespace tlurkit
