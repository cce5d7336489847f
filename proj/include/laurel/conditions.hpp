#pragma once

/* Pointwise multiplicative conditions on nonautonomous coefficients.
 *
 * Three-term systems (one divisor term plus two product terms) admit Laurent
 * evolution exactly when, at every site h,
 *   a(h) a(h+w) b(h+v1) b(h+u1) = b(h) b(h+w) a(h+v2) a(h+u2).
 * Four-term systems need three relations per site, each balancing a pair of
 * the coefficients across one "missing" direction:
 *   a(h+v2) b(h) c(h+u1) = a(h+v3) b(h+u1) c(h)
 *   a(h+u2) b(h+v3) c(h) = a(h) b(h+v1) c(h+u2)
 *   a(h) b(h+u3) c(h+v1) = a(h+u3) b(h) c(h+v2)
 * One-dimensional three-term reductions (shifts -av, -(l-a) / -b, -(l-b),
 * divisor -l) carry the corresponding scalar condition
 *   a(m) a(m-l) b(m-a) b(m-l+a) = b(m) b(m-l) a(m-b) a(m-l+b).
 *
 * The checkers evaluate both sides exactly at every site of a box window and
 * collect violations. The builders produce random positive Table coefficients
 * that satisfy the conditions on a whole window: three-term tables by solving
 * one constraint entry per site in decreasing grading order (each solved
 * entry is never read by a later constraint), four-term tables by applying a
 * random positive gauge to positive constants (which preserves the
 * relations).
 */

#include <array>
#include <utility>
#include <vector>

#include "laurel/coeffs.hpp"
#include "laurel/errors.hpp"
#include "laurel/lattice.hpp"
#include "laurel/rng.hpp"

namespace laurel {

struct ConditionViolation {
    Point h;
    int relation = 0;  // 0 for three-term; 0..2 for the four-term relations
    Rational lhs, rhs;
};

struct ConditionReport {
    std::vector<ConditionViolation> violations;
    std::size_t sites_checked = 0;
    bool ok() const { return violations.empty(); }
};

// Three-term condition at every site of `window`. The shift system must have
// exactly two terms; coefficient evaluation outside a table's coverage
// throws OutsideTableWindow.
ConditionReport check_condition_hm(const CoefficientField& a, const CoefficientField& b,
                                   const ShiftSystem& s, const Box& window);

// Four-term condition (all three relations) at every site of `window`; the
// system must have exactly three terms.
ConditionReport check_condition_bkp(const CoefficientField& a, const CoefficientField& b,
                                    const CoefficientField& c, const ShiftSystem& s,
                                    const Box& window);

// One-dimensional reduced three-term condition with offsets 0 < a < b < l,
// a + b != l (ShapeMismatch otherwise). Coefficients are rank-1 fields;
// `window` is a rank-1 box of sites m.
ConditionReport check_condition_reduced(const CoefficientField& alpha,
                                        const CoefficientField& beta, std::int64_t a,
                                        std::int64_t b, std::int64_t l, const Box& window);

// Sites h of `table_window` whose whole condition stencil (h plus every
// shift) stays inside `table_window`.
Box condition_site_box(const ShiftSystem& s, const Box& table_window);

// Random positive tables on `window` satisfying the three-term condition at
// every site of condition_site_box(s, window).
std::pair<CoefficientField, CoefficientField> make_consistent_3term_tables(
    const ShiftSystem& s, const Point& grading, const Box& window, Rng& rng);

// Random positive tables on `window` satisfying all three four-term
// relations wherever their stencils stay inside `window`.
std::array<CoefficientField, 3> make_consistent_4term_tables(const ShiftSystem& s,
                                                             const Box& window, Rng& rng);

}  // namespace laurel
