#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace speedpart {

// Drawing helpers on top of mt19937_64. std::*_distribution output is
// implementation-defined, so anything that feeds a frozen digest or a
// golden test goes through these instead.

inline double draw_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). Modulo bias is irrelevant at the scales used
// here; determinism across standard libraries is what matters.
inline std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
    return rng() % n;
}

inline double draw_range(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * draw_unit(rng);
}

// Standard normal via Box-Muller (one value per call, no caching).
inline double draw_normal(std::mt19937_64& rng) {
    double u1 = draw_unit(rng);
    double u2 = draw_unit(rng);
    while (u1 <= 0.0) u1 = draw_unit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

template <typename T>
void fisher_yates(std::mt19937_64& rng, std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(draw_below(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace speedpart
