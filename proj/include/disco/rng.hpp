#ifndef DISCO_RNG_HPP
#define DISCO_RNG_HPP

#include <complex>
#include <cstdint>
#include <span>

namespace disco {

/**
 * @brief Deterministic splittable random generator.
 *
 * SplitMix64 core with stream derivation by avalanche-mixing a master seed
 * with up to three stream indices. Distinct index tuples give statistically
 * independent streams, so Monte Carlo work can be sharded across threads or
 * sweep points with a fixed stream assignment and merged deterministically.
 *
 * Gaussian variates use Box-Muller on raw 53-bit uniforms rather than
 * std::normal_distribution, whose algorithm is implementation-defined;
 * output is therefore reproducible for a given seed on any platform.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Derive an independent stream for (master, a, b, c).
    static Rng stream(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                      std::uint64_t c = 0);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1).
    double uniform();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    /// Standard normal N(0, 1).
    double normal();

    /// Circularly-symmetric complex normal CN(0, 1): variance 1/2 per part.
    std::complex<double> cnormal();

    /// Sample an index from a discrete distribution. `probs` must sum to ~1.
    std::size_t categorical(std::span<const double> probs);

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace disco

#endif
