#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace seqaudit {

// splitmix64; used to whiten seeds and derive substream seeds.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Deterministic random source. The engine is std::mt19937_64, whose integer
// stream is fixed by the standard; all distributions are implemented by hand
// because std::*_distribution output is implementation-defined and the
// pipeline guarantees bit-identical artifacts for identical (config, seed).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Independent substream for a named purpose (and optional index), so the
    // draw order of one consumer cannot perturb another.
    static Rng derive(std::uint64_t seed, std::string_view purpose,
                      std::uint64_t index = 0) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (char c : purpose) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ull;
        }
        std::uint64_t s = seed;
        std::uint64_t a = splitmix64_next(s);
        s ^= h;
        std::uint64_t b = splitmix64_next(s);
        s ^= index * 0x9e3779b97f4a7c15ull + 1;
        std::uint64_t c = splitmix64_next(s);
        return Rng(a ^ (b * 0x2545f4914f6cdd1dull) ^ c);
    }

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1); never returns an exact endpoint.
    double uniform_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). Modulo bias is irrelevant here; determinism
    // is what matters.
    std::uint64_t below(std::uint64_t n) { return n > 1 ? next_u64() % n : 0; }

    // Standard normal via Box-Muller, cached in pairs.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = uniform_open();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct values sampled uniformly from {0, ..., n-1}, ascending.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

private:
    std::mt19937_64 eng_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

inline std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n,
                                                                std::size_t k) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    for (std::size_t i = 0; i < k && i < n; ++i) {
        std::size_t j = i + static_cast<std::size_t>(below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k < n ? k : n);
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace seqaudit
