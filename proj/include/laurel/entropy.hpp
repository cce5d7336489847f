#pragma once

/* Growth-rate estimation on integer degree sequences.
 *
 * The algebraic entropy of a recurrence is lim sup (log deg f_m) / m. We
 * estimate it from a finite degree sequence by a least-squares fit of
 * log deg f_m against m over a tail of the data, and separately measure how
 * well a quadratic polynomial explains the same tail: polynomial degree
 * growth (entropy zero) leaves a tiny relative residual, exponential growth
 * a large one.
 *
 * All numerics here are double-precision on top of exact integer input;
 * nothing downstream consumes these numbers exactly.
 */

#include <cstdint>
#include <vector>

#include <gmpxx.h>

namespace laurel {

struct EntropyEstimate {
    double slope = 0.0;          // least-squares slope of log(degree) per step
    double lambda_hat = 1.0;     // exp(slope): estimated degree growth ratio
    std::size_t tail_start = 0;  // first index of the fitted tail (inclusive)
    std::size_t tail_end = 0;    // last index of the fitted tail (inclusive)
    double residual = 0.0;       // relative RMS residual of a quadratic fit
    bool zero_compatible = false;  // quadratic fits well and slope is tiny
};

/* Fits the last ceil(tail_fraction * n) entries of the sequence.
 *
 * The log-slope regression uses the positive tail entries (a degree can be
 * zero; its logarithm is skipped) and is clamped to be nonnegative. At least
 * ten positive tail entries are required — fewer make both fits meaningless —
 * otherwise DomainError. tail_fraction must lie in (0, 1]; anything else is
 * std::invalid_argument.
 *
 * The quadratic fit runs over every tail entry. Entries exceeding 2^500 would
 * degrade double arithmetic, so the residual is reported as infinity in that
 * case (the slope is still meaningful: logarithms stay accurate).
 *
 * zero_compatible requires residual < 0.05 and slope < log(1.05). */
EntropyEstimate entropy_estimate(const std::vector<mpz_class>& degrees,
                                 double tail_fraction = 0.5);
EntropyEstimate entropy_estimate(const std::vector<std::int64_t>& degrees,
                                 double tail_fraction = 0.5);

}  // namespace laurel
