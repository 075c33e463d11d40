#ifndef FEDSPECTRUM_RNG_HPP
#define FEDSPECTRUM_RNG_HPP
#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace fedspectrum {

/*
 * Seeded random streams.
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the
 * standard. The distributions in <random> are not (libstdc++ and libc++
 * produce different normals), so uniform and Gaussian variates are derived
 * here directly from the raw 64-bit output. This keeps every generator a
 * pure, portable function of its seed.
 *
 * Child streams are keyed: derive_seed(master, {node, round, example}) mixes
 * the keys with splitmix64 so results do not depend on evaluation order.
 */

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t derive_seed(std::uint64_t master,
                                           std::initializer_list<std::uint64_t> keys) noexcept {
    std::uint64_t h = splitmix64(master);
    for (auto k : keys) {
        h = splitmix64(h ^ splitmix64(k + 0x632BE59BD9B4E019ULL));
    }
    return h;
}

// Stream tags keep the different consumers of one (seed, index) pair apart.
namespace stream {
inline constexpr std::uint64_t traffic = 0x7472;
inline constexpr std::uint64_t channel = 0x6368;
inline constexpr std::uint64_t sensing = 0x7365;
inline constexpr std::uint64_t example = 0x6578;
inline constexpr std::uint64_t shuffle = 0x7368;
inline constexpr std::uint64_t init = 0x696e;
inline constexpr std::uint64_t attack = 0x6174;
inline constexpr std::uint64_t noise = 0x6e6f;
inline constexpr std::uint64_t node = 0x6e64;
inline constexpr std::uint64_t round = 0x726e;
inline constexpr std::uint64_t tester = 0x7465;
inline constexpr std::uint64_t validation = 0x7661;
inline constexpr std::uint64_t doppler = 0x646f;
inline constexpr std::uint64_t imports = 0x696d;
inline constexpr std::uint64_t fold = 0x666f;
}  // namespace stream

class rng {
public:
    using engine_type = std::mt19937_64;

    explicit rng(std::uint64_t seed) : engine_{seed} {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) {
            return 0;
        }
        const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % n);
        std::uint64_t x = engine_();
        while (x >= limit) {
            x = engine_();
        }
        return x % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via the Marsaglia polar method.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        double v = 0.0;
        double s = 0.0;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

    /// Number of failures before the first success, p in (0, 1].
    std::uint64_t geometric(double p) {
        if (p >= 1.0) {
            return 0;
        }
        const double u = 1.0 - uniform();  // (0, 1]
        return static_cast<std::uint64_t>(std::floor(std::log(u) / std::log1p(-p)));
    }

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    /// k distinct indices drawn uniformly from [0, n) (partial Fisher-Yates).
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k) {
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) {
            idx[i] = i;
        }
        if (k > n) {
            k = n;
        }
        for (std::size_t i = 0; i < k; ++i) {
            const auto j = i + static_cast<std::size_t>(below(n - i));
            std::swap(idx[i], idx[j]);
        }
        idx.resize(k);
        return idx;
    }

private:
    engine_type engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace fedspectrum

#endif  // FEDSPECTRUM_RNG_HPP
