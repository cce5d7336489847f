#pragma once

/* Deterministic random source. mt19937_64 output is pinned bit-for-bit by the
 * standard; the range reduction below is rejection sampling, so streams (and
 * therefore CSV artifacts derived from them) are identical on every platform.
 * std::uniform_int_distribution is deliberately avoided: its mapping from raw
 * engine output to values is implementation-defined.
 */

#include <cstdint>
#include <random>

#include "laurel/rational.hpp"

namespace laurel {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [lo, hi], both ends inclusive. Requires lo <= hi.
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(engine_());  // full 64-bit range
        const std::uint64_t limit = std::uint64_t(-1) - (std::uint64_t(-1) % span);
        std::uint64_t draw;
        do {
            draw = engine_();
        } while (draw >= limit);
        return lo + static_cast<std::int64_t>(draw % span);
    }

    // Random nonzero rational p/q with p, q in [2, bound]; optionally negated.
    Rational rational(std::int64_t bound = 1000000, bool allow_negative = false) {
        Rational r(uniform(2, bound), uniform(2, bound));
        r.canonicalize();
        if (allow_negative && uniform(0, 1) == 1) r = -r;
        return r;
    }

    bool coin() { return uniform(0, 1) == 1; }

private:
    std::mt19937_64 engine_;
};

}  // namespace laurel
