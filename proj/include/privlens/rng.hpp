#pragma once

// Seeded draws used by the splitter and the synthetic generator. std::mt19937_64
// is standard-specified, but the library distributions are not; these helpers
// keep every draw bit-reproducible across standard libraries.

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace privlens {

using Rng = std::mt19937_64;

// Uniform in [0, n). Modulo reduction; the bias at 64 bits is irrelevant here
// and determinism is what matters.
inline std::uint64_t draw_below(Rng& rng, std::uint64_t n) {
    return n == 0 ? 0 : rng() % n;
}

// Uniform in [lo, hi], inclusive.
inline std::int64_t draw_between(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(draw_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

// Uniform in [0, 1) with 53 bits.
inline double draw_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool draw_coin(Rng& rng, double probability) {
    return draw_unit(rng) < probability;
}

// In-place Fisher-Yates.
template <typename T>
void draw_shuffle(Rng& rng, std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(draw_below(rng, i));
        std::swap(values[i - 1], values[j]);
    }
}

}  // namespace privlens
