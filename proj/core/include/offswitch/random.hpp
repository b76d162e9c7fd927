#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace offswitch {

/// SplitMix64 finalizer. Used for seeding and for deriving per-trial seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/**
 * Seedable, splittable random stream.
 *
 * Algorithm identity: xoshiro256** (Blackman & Vigna, 2018) with its 256-bit
 * state filled by four successive SplitMix64 outputs from the seed. Doubles
 * use the top 53 bits of one output. Nothing here depends on the standard
 * library's distributions, so draws are identical across platforms.
 *
 * Satisfies UniformRandomBitGenerator.
 */
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed) noexcept;

    /// Stream for trial `index` under `master_seed`:
    /// seed = mix64(master_seed ^ mix64(index + 0x9e3779b97f4a7c15)).
    static RandomStream for_trial(std::uint64_t master_seed, std::uint64_t index) noexcept;

    /// Independent child stream keyed by `key`; does not advance this stream.
    RandomStream split(std::uint64_t key) const noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
    result_type operator()() noexcept { return next(); }

    std::uint64_t next() noexcept;

    /// Uniform on [0, 1).
    double uniform() noexcept;
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) noexcept;
    /// Uniform integer in [0, n); n must be positive. Unbiased (rejection).
    std::size_t index(std::size_t n) noexcept;
    /// Uniform integer in [lo, hi] inclusive.
    std::size_t between(std::size_t lo, std::size_t hi) noexcept;
    /// Standard exponential variate.
    double exponential() noexcept;
    /// Draw from the flat Dirichlet distribution on the (n-1)-simplex.
    std::vector<double> simplex(std::size_t n);

private:
    std::array<std::uint64_t, 4> state_{};
};

} // namespace offswitch
