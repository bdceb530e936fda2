#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace blicket {

// splitmix64 finalizer; used to derive per-problem seeds from a master seed.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic RNG. The engine (mt19937_64) is pinned by the standard and the
// sampling helpers below are hand-rolled, so identical seeds give identical
// streams on every platform; std::uniform_int_distribution would not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform in [0, n)
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    // uniform integer in [lo, hi], inclusive
    int uniform_int(int lo, int hi) {
        if (lo > hi) throw std::invalid_argument("Rng::uniform_int: empty range");
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    // uniform in [0, 1), 53-bit resolution
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

    // k distinct elements drawn without replacement, in draw order
    template <typename T>
    std::vector<T> sample(std::vector<T> v, std::size_t k) {
        if (k > v.size()) throw std::invalid_argument("Rng::sample: k exceeds population");
        std::vector<T> out;
        out.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(below(v.size() - i));
            std::swap(v[i], v[j]);
            out.push_back(v[i]);
        }
        return out;
    }

    template <typename T>
    const T& choice(const std::vector<T>& v) {
        if (v.empty()) throw std::invalid_argument("Rng::choice: empty population");
        return v[below(v.size())];
    }

private:
    std::mt19937_64 eng_;
};

} // namespace blicket
