#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace hyperact {

/// Deterministic random source used everywhere randomness is needed
/// (initialization, dropout, shuffles, synthetic data).
///
/// The engine is the 64-bit Mersenne Twister (std::mt19937_64), whose raw
/// output sequence is fixed by the C++ standard. All mappings from raw draws
/// to doubles and indices are implemented here rather than through
/// std::*_distribution, so a given seed produces the identical stream on
/// every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Next raw engine word.
    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller. Consumes exactly two uniform draws
    /// per call; no spare value is cached, keeping the stream position a
    /// pure function of the call count.
    double normal();

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform index in [0, n). Lemire multiply-shift reduction of one raw
    /// draw; n must be nonzero.
    std::size_t index(std::size_t n);

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace hyperact
