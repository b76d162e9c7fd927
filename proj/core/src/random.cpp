#include "offswitch/random.hpp"

#include <bit>
#include <cmath>

namespace offswitch {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

} // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) noexcept {
    for (auto& word : state_) {
        seed += kGolden;
        word = mix64(seed);
    }
}

RandomStream RandomStream::for_trial(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return RandomStream(mix64(master_seed ^ mix64(index + kGolden)));
}

RandomStream RandomStream::split(std::uint64_t key) const noexcept {
    return RandomStream(mix64(state_[0] ^ std::rotl(state_[3], 17) ^ mix64(key + kGolden)));
}

std::uint64_t RandomStream::next() noexcept {
    const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
}

double RandomStream::uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
}

std::size_t RandomStream::index(std::size_t n) noexcept {
    const std::uint64_t bound = n;
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t x = next();
        if (x >= threshold) return static_cast<std::size_t>(x % bound);
    }
}

std::size_t RandomStream::between(std::size_t lo, std::size_t hi) noexcept {
    return lo + index(hi - lo + 1);
}

double RandomStream::exponential() noexcept {
    // 1 - u lies in (0, 1], so the log is finite.
    return -std::log1p(-uniform());
}

std::vector<double> RandomStream::simplex(std::size_t n) {
    std::vector<double> p(n);
    double total = 0.0;
    for (auto& x : p) {
        x = exponential();
        total += x;
    }
    if (total <= 0.0) {
        // Every draw was exactly zero; fall back to the barycenter.
        for (auto& x : p) x = 1.0 / static_cast<double>(n);
        return p;
    }
    for (auto& x : p) x /= total;
    return p;
}

} // namespace offswitch
