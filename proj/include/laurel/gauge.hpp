#pragma once

/* Gauge transformations of coefficient fields.
 *
 * A positive function phi on lattice points acts on an equation by
 *   a_j(h) -> phi(h) phi(h+w) / (phi(h+v_j) phi(h+u_j)) * a_j(h),
 * which rescales every iterate f_h by phi(h) and therefore preserves the
 * Laurent property, denominators, and degrees. Two coefficient systems are
 * equivalent exactly when such a phi links them.
 *
 * The builders construct the phi that carries a nonautonomous system to
 * prescribed constants. They work by multiplicative integration: a potential
 * is specified by its ratios along a set of edge directions, integrated by
 * breadth-first propagation (base value 1 at the lexicographically smallest
 * point of every connected component), and then every edge is re-verified.
 * The pointwise coefficient conditions are exactly the commutator identities
 * that make this integration consistent, so the builders first check the
 * conditions (throwing ConditionViolated at the first bad site) and treat
 * any residual edge mismatch as CompatibilityError.
 *
 * Coverage bookkeeping: to transform on a window W, phi must be known on
 * gauge_support_box(s, W) (the window widened by every shift); building that
 * phi reads coefficients on gauge_coverage_box(s, W), which widens the
 * support box once more along the u-shifts.
 */

#include <functional>
#include <map>
#include <vector>

#include "laurel/coeffs.hpp"
#include "laurel/conditions.hpp"
#include "laurel/errors.hpp"
#include "laurel/lattice.hpp"

namespace laurel {

struct GaugeFunction {
    std::map<Point, Rational> values;

    const Rational& at(const Point& h) const;  // OutsideTableWindow if absent
    GaugeFunction inverse() const;             // pointwise reciprocal
};

// One edge family of a multiplicative potential: value(h + step) =
// factor(h) * value(h) wherever both endpoints belong to the point set.
struct EdgeSpec {
    Point step;
    std::function<Rational(const Point&)> factor;
};

// Integrates a potential over `points` from its edge ratios, then verifies
// every edge; an edge whose ratio disagrees with the integrated values
// throws CompatibilityError. Components not linked by any edge are
// normalized independently (value 1 at their smallest point).
GaugeFunction integrate_multiplicative(const std::vector<Point>& points,
                                       const std::vector<EdgeSpec>& edges);

// phi must cover this box to transform coefficients on `window`.
Box gauge_support_box(const ShiftSystem& s, const Box& window);
// Coefficient tables must cover this box for build_gauge_* on `window`.
Box gauge_coverage_box(const ShiftSystem& s, const Box& window);

// The transformed equation: same shifts and domain, Table coefficients on
// `window` holding the gauged values.
Equation apply_gauge(const Equation& eq, const GaugeFunction& phi, const Box& window);

// phi carrying (a, b) to the constants (target_a, target_b) on `window`;
// defined on gauge_support_box. Throws ShapeMismatch unless the system has
// two terms, ConditionViolated when the three-term condition fails on the
// coverage region.
GaugeFunction build_gauge_hm(const CoefficientField& a, const CoefficientField& b,
                             const ShiftSystem& s, const Rational& target_a,
                             const Rational& target_b, const Box& window);

// Four-term analogue: three coefficients, three targets, three pointwise
// relations checked up front.
GaugeFunction build_gauge_bkp(const CoefficientField& a, const CoefficientField& b,
                              const CoefficientField& c, const ShiftSystem& s,
                              const Rational& target_a, const Rational& target_b,
                              const Rational& target_c, const Box& window);

}  // namespace laurel
