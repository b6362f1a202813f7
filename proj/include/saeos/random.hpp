#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace saeos {

// Distributions are written out here instead of using <random>'s, whose
// output is implementation-defined; generated instances must be identical
// across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        // Rejection sampling keeps the draw unbiased.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t r = engine_();
        while (r >= limit) r = engine_();
        return lo + static_cast<std::int64_t>(r % span);
    }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Mixes a master seed with a tag and an index into an independent stream seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t index) {
    std::uint64_t h = splitmix64(master);
    for (char c : tag) h = splitmix64(h ^ static_cast<unsigned char>(c));
    return splitmix64(h ^ splitmix64(index));
}

}  // namespace saeos
